#pragma once

#include <vector>

#include "snndyn/snnd.hpp"

namespace snndyn {

// Points touched by one batch. t1 holds survivors whose top-k changed in
// either phase, t2 survivors whose top-k contains a t1 point; only their
// adjacency is recomputed during the selective graph update.
struct AffectedSets {
    IdSet t1_add;
    IdSet t2_add;
    IdSet t1_del;
    IdSet t2_del;
    IdSet t1;  // (t1_add | t1_del) - deleted_ids
    IdSet t2;  // ((t2_add | t2_del) - t1) - deleted_ids
    std::vector<PointId> new_ids;
    IdSet deleted_ids;
};

struct InsertionOutcome {
    IdSet t1_add;
    IdSet t2_add;
    std::vector<PointId> new_ids;
};

struct DeletionOutcome {
    IdSet t1_del;
    IdSet t2_del;
};

// Appends the additions with fresh ids, builds their w-lists over the
// enlarged dataset, and merges them into every pre-existing list. t1_add
// collects pre-existing points whose top-k changed; t2_add those whose
// post-insertion top-k contains a t1_add point.
InsertionOutcome insertion_phase(EngineState& state,
                                 const std::vector<std::vector<double>>& additions);

// Removes the points and purges them from every surviving list. Lists left
// shorter than k are rebuilt over the shrunken dataset and their owners join
// t1_del unconditionally.
DeletionOutcome deletion_phase(EngineState& state, const IdSet& deletions);

// The update-set algebra combining both phases of one batch.
AffectedSets combine_affected(IdSet t1_add, IdSet t2_add, IdSet t1_del, IdSet t2_del,
                              std::vector<PointId> new_ids, IdSet deleted_ids);

// Selective graph update. Vertices are added for new points and removed for
// deleted ones; every vertex in t1 or new_ids has its adjacency discarded
// (mirrors included) and rebuilt from its current k-list; t2 vertices only
// have their pairs with t1/new vertices re-evaluated. The result equals a
// from-scratch graph build over the updated dataset.
void update_snn_graph(EngineState& state, const AffectedSets& affected);

// Full batch update: insertions, deletions, affected-set algebra, selective
// graph update, recluster. The resulting clustering is identical to running
// the from-scratch pipeline on the updated dataset. Validates the whole
// batch before mutating anything.
AffectedSets bisd_update(EngineState& state, const UpdateBatch& batch);

}  // namespace snndyn
