#include "snndyn/neighbor_list.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace snndyn {

namespace {

// Distance without the per-call dimension check; callers come through
// Dataset so the dimensions already agree.
double distance_unchecked(std::span<const double> a, std::span<const double> b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

bool topk_ids_equal(const std::vector<NeighborEntry>& a, const std::vector<NeighborEntry>& b,
                    int k) {
    for (int i = 0; i < k; ++i)
        if (a[i].id != b[i].id) return false;
    return true;
}

}  // namespace

std::vector<PointId> NeighborList::topk(int k) const {
    const auto slice = topk_entries(k);
    std::vector<PointId> ids(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) ids[i] = slice[i].id;
    return ids;
}

std::span<const NeighborEntry> NeighborList::topk_entries(int k) const {
    if (k < 1 || entries.size() < static_cast<std::size_t>(k))
        throw std::logic_error("topk: list of point " + std::to_string(owner) + " has " +
                               std::to_string(entries.size()) + " entries, need " +
                               std::to_string(k));
    return {entries.data(), static_cast<std::size_t>(k)};
}

NeighborList build_wlist(const Dataset& dataset, PointId owner, const Params& params) {
    params.validate();
    if (!dataset.contains(owner))
        throw std::logic_error("build_wlist: owner not in dataset");
    const std::size_t n = dataset.size();
    if (n < static_cast<std::size_t>(params.k) + 1)
        throw std::runtime_error("dataset too small for k");

    const std::size_t cap = std::min(static_cast<std::size_t>(params.w), n - 1);
    const auto owner_coords = dataset.point(owner).coords;

    // Bounded max-heap on (distance, id); the root is the worst kept entry.
    std::vector<NeighborEntry> heap;
    heap.reserve(cap + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point q = dataset.point_at(i);
        if (q.id == owner) continue;
        const NeighborEntry entry{q.id, distance_unchecked(owner_coords, q.coords)};
        if (heap.size() < cap) {
            heap.push_back(entry);
            std::push_heap(heap.begin(), heap.end(), rank_less);
        } else if (rank_less(entry, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), rank_less);
            heap.back() = entry;
            std::push_heap(heap.begin(), heap.end(), rank_less);
        }
    }
    std::sort_heap(heap.begin(), heap.end(), rank_less);
    return NeighborList{owner, std::move(heap)};
}

bool merge_new_candidates(NeighborList& list, std::vector<NeighborEntry> candidates,
                          const Params& params) {
    assert(list.entries.size() >= static_cast<std::size_t>(params.k));
    const std::size_t cap =
        std::min(static_cast<std::size_t>(params.w), list.entries.size());
    if (candidates.empty()) return false;

    // Anything ranked at or past the current tail cannot survive truncation.
    const NeighborEntry tail = list.entries.back();
    std::erase_if(candidates, [&](const NeighborEntry& c) { return !rank_less(c, tail); });
    if (candidates.empty()) return false;
    std::sort(candidates.begin(), candidates.end(), rank_less);

    std::vector<NeighborEntry> merged;
    merged.reserve(cap);
    auto old_it = list.entries.begin();
    auto cand_it = candidates.begin();
    while (merged.size() < cap) {
        if (cand_it != candidates.end() &&
            (old_it == list.entries.end() || rank_less(*cand_it, *old_it)))
            merged.push_back(*cand_it++);
        else
            merged.push_back(*old_it++);
    }

    const bool topk_changed = !topk_ids_equal(list.entries, merged, params.k);
    list.entries = std::move(merged);
    return topk_changed;
}

RemovalOutcome remove_deleted(NeighborList& list, const IdSet& deleted, int k) {
    if (deleted.empty()) return {};
    std::vector<PointId> old_topk;
    const bool had_topk = list.entries.size() >= static_cast<std::size_t>(k);
    if (had_topk) {
        old_topk.reserve(k);
        for (int i = 0; i < k; ++i) old_topk.push_back(list.entries[i].id);
    }
    std::erase_if(list.entries,
                  [&](const NeighborEntry& e) { return deleted.count(e.id) != 0; });

    RemovalOutcome outcome;
    outcome.needs_rebuild = list.entries.size() < static_cast<std::size_t>(k);
    if (outcome.needs_rebuild || !had_topk) {
        outcome.topk_changed = true;
        return outcome;
    }
    for (int i = 0; i < k; ++i) {
        if (list.entries[i].id != old_topk[i]) {
            outcome.topk_changed = true;
            break;
        }
    }
    return outcome;
}

}  // namespace snndyn
