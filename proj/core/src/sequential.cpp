#include "snndyn/sequential.hpp"

#include <stdexcept>

namespace snndyn {

SequentialStats sequential_update(EngineState& state, const UpdateBatch& batch) {
    // Same validation guarantees as the batched path: fail before touching
    // the state. Additions run first, so the intermediate dataset is never
    // smaller than the final one.
    apply_batch_ids(state.dataset, batch);
    const std::size_t post_size =
        state.dataset.size() + batch.additions.size() - batch.deletions.size();
    if (post_size < static_cast<std::size_t>(state.params.k) + 1)
        throw std::runtime_error("dataset too small after deletions");

    SequentialStats stats;
    auto apply_single = [&](UpdateBatch single) {
        const AffectedSets affected = bisd_update(state, single);
        ++stats.updates;
        stats.t1_total += affected.t1.size();
        stats.t2_total += affected.t2.size();
    };

    for (const auto& row : batch.additions) {
        UpdateBatch single;
        single.additions.push_back(row);
        apply_single(std::move(single));
    }
    for (PointId id : sorted_ids(batch.deletions)) {
        UpdateBatch single;
        single.deletions.insert(id);
        apply_single(std::move(single));
    }
    return stats;
}

}  // namespace snndyn
