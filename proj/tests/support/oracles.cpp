#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace oracles {

using namespace snndyn;

std::vector<NeighborEntry> full_ranking(const Dataset& dataset, PointId owner) {
    const Point p = dataset.point(owner);
    std::vector<NeighborEntry> ranking;
    ranking.reserve(dataset.size() - 1);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Point q = dataset.point_at(i);
        if (q.id == owner) continue;
        ranking.push_back(NeighborEntry{q.id, distance(p, q)});
    }
    std::sort(ranking.begin(), ranking.end(), rank_less);
    return ranking;
}

int overlap_by_sets(const std::vector<PointId>& kp, const std::vector<PointId>& kq, PointId p,
                    PointId q) {
    std::set<PointId> a(kp.begin(), kp.end());
    std::set<PointId> b(kq.begin(), kq.end());
    for (PointId endpoint : {p, q}) {
        a.erase(endpoint);
        b.erase(endpoint);
    }
    int count = 0;
    for (PointId id : a)
        if (b.count(id)) ++count;
    return count;
}

snndyn::SnnGraph graph_by_definition(
    const std::unordered_map<PointId, std::vector<PointId>>& klists, const Params& params) {
    std::vector<PointId> ids;
    ids.reserve(klists.size());
    for (const auto& [id, list] : klists) ids.push_back(id);
    std::sort(ids.begin(), ids.end());

    SnnGraph graph;
    for (PointId id : ids) graph.add_vertex(id);

    const auto member = [](const std::vector<PointId>& list, PointId id) {
        return std::find(list.begin(), list.end(), id) != list.end();
    };
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const PointId p = ids[i];
            const PointId q = ids[j];
            const auto& kp = klists.at(p);
            const auto& kq = klists.at(q);
            if (!member(kp, q) || !member(kq, p)) continue;
            const int weight = overlap_by_sets(kp, kq, p, q);
            if (weight >= params.sim_threshold) graph.set_edge(p, q, weight);
        }
    }
    return graph;
}

ClusterAssignment clustering_by_bfs(const SnnGraph& graph, const IdSet& cores,
                                    const std::vector<PointId>& all_ids) {
    // Components of the core-core subgraph via BFS.
    std::unordered_map<PointId, PointId> core_label;
    for (PointId start : sorted_ids(cores)) {
        if (core_label.count(start)) continue;
        std::vector<PointId> component{start};
        std::deque<PointId> frontier{start};
        IdSet seen{start};
        while (!frontier.empty()) {
            const PointId at = frontier.front();
            frontier.pop_front();
            for (const SnnGraph::Edge& e : graph.neighbors(at)) {
                if (!cores.count(e.neighbor) || seen.count(e.neighbor)) continue;
                seen.insert(e.neighbor);
                component.push_back(e.neighbor);
                frontier.push_back(e.neighbor);
            }
        }
        const PointId label = *std::min_element(component.begin(), component.end());
        for (PointId member : component) core_label.emplace(member, label);
    }

    ClusterAssignment assignment;
    for (PointId id : all_ids) {
        PointAssignment pa;
        if (cores.count(id)) {
            pa.is_core = true;
            pa.label = core_label.at(id);
        } else {
            PointId best_core = -1;
            int best_weight = -1;
            for (const SnnGraph::Edge& e : graph.neighbors(id)) {
                if (!cores.count(e.neighbor)) continue;
                if (e.weight > best_weight ||
                    (e.weight == best_weight && e.neighbor < best_core)) {
                    best_weight = e.weight;
                    best_core = e.neighbor;
                }
            }
            if (best_core >= 0) pa.label = core_label.at(best_core);
        }
        assignment.points.emplace(id, pa);
    }
    return assignment;
}

Dataset random_dataset(std::mt19937_64& rng, std::size_t n, int dim) {
    std::uniform_real_distribution<double> center(0.0, 100.0);
    std::normal_distribution<double> noise(0.0, 3.0);
    std::uniform_real_distribution<double> uniform(-20.0, 120.0);
    std::uniform_int_distribution<int> center_count(3, 8);

    const int centers = center_count(rng);
    std::vector<std::vector<double>> means(centers, std::vector<double>(dim));
    for (auto& mean : means)
        for (double& c : mean) c = center(rng);

    Dataset dataset(dim);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, centers - 1);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (coin(rng) < 0.1) {
            for (double& c : row) c = uniform(rng);
        } else {
            const auto& mean = means[pick(rng)];
            for (int d = 0; d < dim; ++d) row[d] = mean[d] + noise(rng);
        }
        dataset.add_point(row);
    }
    return dataset;
}

UpdateBatch random_batch(std::mt19937_64& rng, const Dataset& dataset, double add_frac_pct,
                         double del_frac_pct) {
    const std::size_t n = dataset.size();
    UpdateBatch batch;

    const auto count_for = [n](double pct) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(n * pct / 100.0)));
    };

    if (add_frac_pct > 0.0) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::normal_distribution<double> jitter(0.0, 1.0);
        const std::size_t adds = count_for(add_frac_pct);
        for (std::size_t i = 0; i < adds; ++i) {
            const auto base = dataset.point_at(pick(rng)).coords;
            std::vector<double> row(base.begin(), base.end());
            for (double& c : row) c += jitter(rng);
            batch.additions.push_back(std::move(row));
        }
    }
    if (del_frac_pct > 0.0) {
        std::vector<PointId> chosen;
        std::sample(dataset.ids().begin(), dataset.ids().end(), std::back_inserter(chosen),
                    count_for(del_frac_pct), rng);
        batch.deletions.insert(chosen.begin(), chosen.end());
    }
    return batch;
}

}  // namespace oracles
