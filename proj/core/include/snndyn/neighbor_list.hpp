#pragma once

#include <span>
#include <vector>

#include "snndyn/dataset.hpp"
#include "snndyn/params.hpp"

namespace snndyn {

struct NeighborEntry {
    PointId id = -1;
    double dist = 0.0;

    bool operator==(const NeighborEntry&) const = default;
};

// Total order on (distance, id); ids are unique so ties cannot occur.
inline bool rank_less(const NeighborEntry& a, const NeighborEntry& b) noexcept {
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.id < b.id;
}

// Extended nearest neighbor list w(P): an exact prefix of the owner's full
// (distance, id) ranking over the current dataset, at most w long and never
// shorter than k. The top-k slice k(P) is never stored separately.
struct NeighborList {
    PointId owner = -1;
    std::vector<NeighborEntry> entries;  // strictly ascending by (distance, id)

    // First k neighbor ids in rank order. Throws std::logic_error when the
    // list is shorter than k; maintenance must have rebuilt it first.
    std::vector<PointId> topk(int k) const;

    // Non-allocating view of the first k entries.
    std::span<const NeighborEntry> topk_entries(int k) const;

    bool operator==(const NeighborList&) const = default;
};

// Builds the owner's list from scratch: the top-min(w, n-1) neighbors by
// (distance, id). Requires at least k other points in the dataset.
NeighborList build_wlist(const Dataset& dataset, PointId owner, const Params& params);

// Merges freshly inserted points into an existing list and truncates the
// result to min(w, previous length): growing past the previous exact prefix
// could skip old points ranked in between. Candidate ids must not already
// be present. Returns whether the top-k slice changed.
bool merge_new_candidates(NeighborList& list, std::vector<NeighborEntry> candidates,
                          const Params& params);

struct RemovalOutcome {
    bool topk_changed = false;
    bool needs_rebuild = false;  // fewer than k entries survived
};

// Drops deleted ids from the list, preserving order. When needs_rebuild is
// set the caller must rebuild the list over the post-deletion dataset;
// topk_changed is then reported as true regardless.
RemovalOutcome remove_deleted(NeighborList& list, const IdSet& deleted, int k);

}  // namespace snndyn
