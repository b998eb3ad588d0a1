#include "snndyn/bisd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "snndyn/concurrency.hpp"

namespace snndyn {

namespace {

double distance_unchecked(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

// True iff any of the first k neighbors of the owner's list is in the set.
bool topk_touches(const NeighborList& list, int k, const IdSet& set) {
    for (const NeighborEntry& e : list.topk_entries(k))
        if (set.count(e.id)) return true;
    return false;
}

}  // namespace

InsertionOutcome insertion_phase(EngineState& state,
                                 const std::vector<std::vector<double>>& additions) {
    InsertionOutcome outcome;
    if (additions.empty()) return outcome;

    const int dim = state.dataset.dim();
    for (const auto& row : additions)
        if (row.size() != static_cast<std::size_t>(dim))
            throw std::runtime_error("addition row has " + std::to_string(row.size()) +
                                     " fields, dataset dimension is " + std::to_string(dim));

    const std::vector<PointId> existing = state.dataset.ids();
    outcome.new_ids.reserve(additions.size());
    for (const auto& row : additions) outcome.new_ids.push_back(state.dataset.add_point(row));

    // Fresh lists for the new points, ranked over everything but themselves.
    std::vector<NeighborList> fresh(outcome.new_ids.size());
    parallel_for(outcome.new_ids.size(), [&](std::size_t i) {
        fresh[i] = build_wlist(state.dataset, outcome.new_ids[i], state.params);
    });
    for (auto& list : fresh) {
        const PointId owner = list.owner;
        state.wlists.emplace(owner, std::move(list));
    }

    // Merge the new points into every pre-existing list. The map is not
    // resized past this point, so distinct owners can be updated in parallel.
    std::vector<std::span<const double>> new_coords(outcome.new_ids.size());
    for (std::size_t j = 0; j < outcome.new_ids.size(); ++j)
        new_coords[j] = state.dataset.point(outcome.new_ids[j]).coords;

    std::vector<char> topk_changed(existing.size(), 0);
    parallel_for(existing.size(), [&](std::size_t idx) {
        NeighborList& list = state.wlists.at(existing[idx]);
        const auto owner_coords = state.dataset.point(existing[idx]).coords;
        const NeighborEntry tail = list.entries.back();
        std::vector<NeighborEntry> candidates;
        for (std::size_t j = 0; j < new_coords.size(); ++j) {
            const NeighborEntry e{outcome.new_ids[j],
                                  distance_unchecked(owner_coords, new_coords[j])};
            if (rank_less(e, tail)) candidates.push_back(e);
        }
        if (merge_new_candidates(list, std::move(candidates), state.params))
            topk_changed[idx] = 1;
    });

    for (std::size_t idx = 0; idx < existing.size(); ++idx)
        if (topk_changed[idx]) outcome.t1_add.insert(existing[idx]);

    for (PointId p : existing) {
        if (outcome.t1_add.count(p)) continue;
        if (topk_touches(state.wlists.at(p), state.params.k, outcome.t1_add))
            outcome.t2_add.insert(p);
    }
    return outcome;
}

DeletionOutcome deletion_phase(EngineState& state, const IdSet& deletions) {
    DeletionOutcome outcome;
    if (deletions.empty()) return outcome;

    state.dataset.remove_points(deletions);  // validates before mutating
    if (state.dataset.size() < static_cast<std::size_t>(state.params.k) + 1)
        throw std::runtime_error("dataset too small after deletions");
    for (PointId id : deletions) state.wlists.erase(id);

    const std::vector<PointId>& survivors = state.dataset.ids();
    std::vector<char> topk_changed(survivors.size(), 0);
    parallel_for(survivors.size(), [&](std::size_t idx) {
        NeighborList& list = state.wlists.at(survivors[idx]);
        const RemovalOutcome removal = remove_deleted(list, deletions, state.params.k);
        if (removal.needs_rebuild)
            list = build_wlist(state.dataset, survivors[idx], state.params);
        if (removal.topk_changed || removal.needs_rebuild) topk_changed[idx] = 1;
    });

    for (std::size_t idx = 0; idx < survivors.size(); ++idx)
        if (topk_changed[idx]) outcome.t1_del.insert(survivors[idx]);

    for (PointId p : survivors) {
        if (outcome.t1_del.count(p)) continue;
        if (topk_touches(state.wlists.at(p), state.params.k, outcome.t1_del))
            outcome.t2_del.insert(p);
    }
    return outcome;
}

AffectedSets combine_affected(IdSet t1_add, IdSet t2_add, IdSet t1_del, IdSet t2_del,
                              std::vector<PointId> new_ids, IdSet deleted_ids) {
    AffectedSets sets;
    sets.t1 = t1_add;
    sets.t1.insert(t1_del.begin(), t1_del.end());
    for (PointId id : deleted_ids) sets.t1.erase(id);

    sets.t2 = t2_add;
    sets.t2.insert(t2_del.begin(), t2_del.end());
    for (PointId id : sets.t1) sets.t2.erase(id);
    for (PointId id : deleted_ids) sets.t2.erase(id);

    sets.t1_add = std::move(t1_add);
    sets.t2_add = std::move(t2_add);
    sets.t1_del = std::move(t1_del);
    sets.t2_del = std::move(t2_del);
    sets.new_ids = std::move(new_ids);
    sets.deleted_ids = std::move(deleted_ids);
    return sets;
}

void update_snn_graph(EngineState& state, const AffectedSets& affected) {
    SnnGraph& graph = state.graph;
    const Params& params = state.params;

    for (PointId id : affected.new_ids) graph.add_vertex(id);
    for (PointId id : sorted_ids(affected.deleted_ids)) graph.remove_vertex(id);

    IdSet full_set(affected.t1.begin(), affected.t1.end());
    full_set.insert(affected.new_ids.begin(), affected.new_ids.end());
    const std::vector<PointId> full = sorted_ids(full_set);

    // Discard all old adjacency of the fully-updated vertices first; edges
    // that died because mutuality broke leave no stale mirror behind.
    for (PointId p : full) graph.clear_vertex_edges(p);

    // Lazily sorted top-k slices for the similarity counts.
    std::unordered_map<PointId, std::vector<PointId>> sorted_k;
    auto sorted_topk = [&](PointId id) -> const std::vector<PointId>& {
        const auto it = sorted_k.find(id);
        if (it != sorted_k.end()) return it->second;
        auto ids = state.wlists.at(id).topk(params.k);
        std::sort(ids.begin(), ids.end());
        return sorted_k.emplace(id, std::move(ids)).first->second;
    };
    auto topk_contains = [&](PointId owner, PointId wanted) {
        for (const NeighborEntry& e : state.wlists.at(owner).topk_entries(params.k))
            if (e.id == wanted) return true;
        return false;
    };
    auto evaluate_pair = [&](PointId p, PointId q) -> int {
        // Weight of the candidate edge, or -1 when no edge may exist.
        if (!topk_contains(q, p)) return -1;
        const int weight = snn_similarity(sorted_topk(p), sorted_topk(q), p, q);
        return weight >= params.sim_threshold ? weight : -1;
    };

    for (PointId p : full) {
        for (const NeighborEntry& e : state.wlists.at(p).topk_entries(params.k)) {
            const int weight = evaluate_pair(p, e.id);
            if (weight >= 0) graph.set_edge(p, e.id, weight);
        }
    }

    // Selective pass: a t2 vertex can only have changed toward t1/new
    // vertices; everything else in its adjacency is left untouched.
    for (PointId r : sorted_ids(affected.t2)) {
        for (const NeighborEntry& e : state.wlists.at(r).topk_entries(params.k)) {
            if (!full_set.count(e.id)) continue;
            const int weight = evaluate_pair(r, e.id);
            if (weight >= 0)
                graph.set_edge(r, e.id, weight);
            else
                graph.remove_edge(r, e.id);
        }
    }
}

AffectedSets bisd_update(EngineState& state, const UpdateBatch& batch) {
    state.params.validate();
    apply_batch_ids(state.dataset, batch);  // validates the whole batch up front
    const std::size_t post_size =
        state.dataset.size() + batch.additions.size() - batch.deletions.size();
    if (post_size < static_cast<std::size_t>(state.params.k) + 1)
        throw std::runtime_error("dataset too small after deletions");

    InsertionOutcome ins = insertion_phase(state, batch.additions);
    DeletionOutcome del = deletion_phase(state, batch.deletions);
    AffectedSets affected =
        combine_affected(std::move(ins.t1_add), std::move(ins.t2_add), std::move(del.t1_del),
                         std::move(del.t2_del), std::move(ins.new_ids), batch.deletions);
    update_snn_graph(state, affected);
    recluster(state);
    return affected;
}

}  // namespace snndyn
