#pragma once

#include "snndyn/bisd.hpp"

namespace snndyn {

struct SequentialStats {
    std::size_t updates = 0;
    std::size_t t1_total = 0;  // summed over the singleton updates
    std::size_t t2_total = 0;

    bool operator==(const SequentialStats&) const = default;
};

// One-change-at-a-time baseline: every addition, then every deletion in
// ascending id order, applied as its own batch with a full recluster in
// between. The final state matches a single batched update.
SequentialStats sequential_update(EngineState& state, const UpdateBatch& batch);

}  // namespace snndyn
