#pragma once

namespace snndyn {

// Clustering parameters shared by the static and incremental pipelines.
// k and w control neighbor list sizes; the thresholds gate SNN edges and
// core labeling. Both thresholds are inclusive (>=).
struct Params {
    int k = 0;               // KNN list size used for clustering
    int w = 0;               // extended neighbor list capacity, w >= k
    int sim_threshold = 0;   // minimum shared-neighbor weight kept as an edge
    int core_threshold = 0;  // minimum thresholded degree for a core point

    // Throws std::runtime_error on an invalid combination.
    void validate() const;

    bool operator==(const Params&) const = default;
};

}  // namespace snndyn
