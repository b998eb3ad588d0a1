#include "harness/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace snndyn::harness {

Workload parse_workload(const std::string& name) {
    if (name == "add") return Workload::Add;
    if (name == "del") return Workload::Del;
    if (name == "mixed") return Workload::Mixed;
    throw std::runtime_error("unknown workload '" + name + "' (expected add|del|mixed)");
}

Dataset make_gaussian_blobs(std::size_t n, int dim, int centers, std::uint64_t seed) {
    if (n == 0 || dim < 1 || centers < 1)
        throw std::runtime_error("make_gaussian_blobs: bad shape");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center_dist(0.0, 100.0);
    std::normal_distribution<double> noise(0.0, 2.0);

    std::vector<std::vector<double>> means(centers, std::vector<double>(dim));
    for (auto& mean : means)
        for (double& c : mean) c = center_dist(rng);

    Dataset dataset(dim);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& mean = means[i % centers];
        for (int d = 0; d < dim; ++d) row[d] = mean[d] + noise(rng);
        dataset.add_point(row);
    }
    return dataset;
}

UpdateBatch synthesize_batch(const Dataset& dataset, double fraction_pct, Workload workload,
                             std::uint64_t seed) {
    if (fraction_pct <= 0.0 || fraction_pct >= 100.0)
        throw std::runtime_error("batch fraction must be in (0, 100)");
    const std::size_t n = dataset.size();
    const std::size_t count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(n * fraction_pct / 100.0)));

    std::mt19937_64 rng(seed);
    UpdateBatch batch;

    if (workload != Workload::Del) {
        // Per-dimension jitter scale from the current data extent.
        const int dim = dataset.dim();
        std::vector<double> lo(dim, std::numeric_limits<double>::infinity());
        std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < n; ++i) {
            const auto coords = dataset.point_at(i).coords;
            for (int d = 0; d < dim; ++d) {
                lo[d] = std::min(lo[d], coords[d]);
                hi[d] = std::max(hi[d], coords[d]);
            }
        }
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::normal_distribution<double> unit(0.0, 1.0);
        std::vector<double> row(dim);
        for (std::size_t i = 0; i < count; ++i) {
            const auto base = dataset.point_at(pick(rng)).coords;
            for (int d = 0; d < dim; ++d)
                row[d] = base[d] + unit(rng) * 0.01 * (hi[d] - lo[d]);
            batch.additions.push_back(row);
        }
    }

    if (workload != Workload::Add) {
        std::vector<PointId> chosen;
        chosen.reserve(count);
        std::sample(dataset.ids().begin(), dataset.ids().end(), std::back_inserter(chosen),
                    count, rng);
        batch.deletions.insert(chosen.begin(), chosen.end());
    }
    return batch;
}

}  // namespace snndyn::harness
