#include "harness/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <sstream>

#include "snndyn/bisd.hpp"
#include "snndyn/concurrency.hpp"
#include "snndyn/sequential.hpp"
#include "snndyn/snapshot.hpp"

namespace snndyn::harness {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double>(elapsed).count();
}

std::size_t snapshot_bytes(const EngineState& state) {
    std::ostringstream sink;
    return save_state(state, sink);
}

}  // namespace

EngineState truncate_lists_to_k(const EngineState& state) {
    EngineState truncated = state;
    const std::size_t k = static_cast<std::size_t>(state.params.k);
    for (auto& [id, list] : truncated.wlists)
        if (list.entries.size() > k) list.entries.resize(k);
    return truncated;
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<BenchRecord> run_bench(const EngineState& initial, const BenchOptions& options,
                                   std::ostream* log) {
    if (options.trials < 1) throw std::runtime_error("trials must be >= 1");
    for (double f : options.fractions)
        if (f <= 0.0 || f >= 100.0)
            throw std::runtime_error("fractions must be percentages in (0, 100)");

    std::vector<BenchRecord> records;
    records.reserve(options.fractions.size() * options.trials);

    for (std::size_t findex = 0; findex < options.fractions.size(); ++findex) {
        const double fraction = options.fractions[findex];
        for (int trial = 0; trial < options.trials; ++trial) {
            const std::uint64_t trial_seed =
                options.seed + 1000003ull * (findex * 1000ull + static_cast<std::uint64_t>(trial));
            const UpdateBatch batch =
                synthesize_batch(initial.dataset, fraction, options.workload, trial_seed);

            BenchRecord record;
            record.dataset = options.dataset_name;
            record.n = initial.dataset.size();
            record.fraction = fraction;
            record.trial = trial;

            const Dataset updated = apply_batch(initial.dataset, batch);

            auto start = std::chrono::steady_clock::now();
            const EngineState oracle = snnd_cluster(updated, initial.params);
            record.t_snnd = seconds_since(start);

            EngineState incremental = initial;
            start = std::chrono::steady_clock::now();
            bisd_update(incremental, batch);
            record.t_bisd = seconds_since(start);

            record.verified = incremental.graph == oracle.graph &&
                              incremental.assignment == oracle.assignment;
            if (!record.verified)
                throw VerificationFailure(
                    "incremental result diverged from the from-scratch pipeline at fraction " +
                    std::to_string(fraction) + ", trial " + std::to_string(trial));

            if (options.time_sequential) {
                EngineState sequential = initial;
                start = std::chrono::steady_clock::now();
                sequential_update(sequential, batch);
                record.t_seq = seconds_since(start);
                if (!(sequential.assignment == oracle.assignment))
                    throw VerificationFailure("sequential baseline diverged at fraction " +
                                              std::to_string(fraction) + ", trial " +
                                              std::to_string(trial));
                record.speedup_seq = record.t_seq / record.t_bisd;
            }

            record.speedup_snnd = record.t_snnd / record.t_bisd;
            record.mem_ratio =
                static_cast<double>(snapshot_bytes(incremental)) /
                static_cast<double>(snapshot_bytes(truncate_lists_to_k(incremental)));

            if (log) {
                (*log) << "fraction=" << record.fraction << " trial=" << record.trial
                       << " t_snnd=" << record.t_snnd << " t_bisd=" << record.t_bisd;
                if (options.time_sequential) (*log) << " t_seq=" << record.t_seq;
                (*log) << " speedup_snnd=" << record.speedup_snnd
                       << " mem_ratio=" << record.mem_ratio << " verified=true\n";
            }
            records.push_back(std::move(record));
        }
    }
    return records;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records, int workers) {
    out << "# workers=" << workers << '\n';
    out << "dataset,n,fraction,trial,t_snnd,t_bisd,t_seq,speedup_snnd,speedup_seq,"
           "mem_ratio,verified\n";
    for (const BenchRecord& r : records) {
        out << r.dataset << ',' << r.n << ',' << r.fraction << ',' << r.trial << ',' << r.t_snnd
            << ',' << r.t_bisd << ',' << r.t_seq << ',' << r.speedup_snnd << ',' << r.speedup_seq
            << ',' << r.mem_ratio << ',' << (r.verified ? "true" : "false") << '\n';
    }
}

}  // namespace snndyn::harness
