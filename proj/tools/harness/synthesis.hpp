#pragma once

#include <cstdint>
#include <string>

#include "snndyn/dataset.hpp"

namespace snndyn::harness {

enum class Workload { Add, Del, Mixed };

Workload parse_workload(const std::string& name);  // "add" | "del" | "mixed"

// Mixture of Gaussian blobs with centers spread over [0, 100]^dim; the
// stand-in for the synthetic benchmark datasets.
Dataset make_gaussian_blobs(std::size_t n, int dim, int centers, std::uint64_t seed);

// Builds one update batch against the dataset. Additions are jittered
// copies of randomly chosen existing points (Gaussian noise, sigma = 1% of
// the per-dimension range) so they land inside real neighborhoods;
// deletions are drawn uniformly without replacement. Deterministic in the
// seed: additions are drawn first, then deletions.
UpdateBatch synthesize_batch(const Dataset& dataset, double fraction_pct, Workload workload,
                             std::uint64_t seed);

}  // namespace snndyn::harness
