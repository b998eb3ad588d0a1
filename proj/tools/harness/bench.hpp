#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "harness/synthesis.hpp"
#include "snndyn/snnd.hpp"

namespace snndyn::harness {

// One timed (fraction, trial) measurement. Times cover the algorithm calls
// only; mem_ratio compares the snapshot size of the incremental state with
// the same state carrying k-length lists.
struct BenchRecord {
    std::string dataset;
    std::size_t n = 0;
    double fraction = 0.0;
    int trial = 0;
    double t_snnd = 0.0;
    double t_bisd = 0.0;
    double t_seq = 0.0;
    double speedup_snnd = 0.0;
    double speedup_seq = 0.0;
    double mem_ratio = 0.0;
    bool verified = false;
};

struct BenchOptions {
    std::string dataset_name = "dataset";
    Params params;
    std::vector<double> fractions;
    int trials = 3;
    std::uint64_t seed = 1;
    Workload workload = Workload::Mixed;
    bool time_sequential = true;  // the one-at-a-time baseline is costly at large fractions
};

// A benchmark measured against a wrong result is meaningless; this aborts
// the run (exit code 1 at the CLI).
struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// For every (fraction, trial): synthesize a batch, time the from-scratch
// pipeline on the updated dataset, the batched incremental update, and the
// sequential baseline from the same starting state, then check the
// incremental output against the from-scratch one. Throws
// VerificationFailure on any mismatch. Progress goes to log when non-null.
std::vector<BenchRecord> run_bench(const EngineState& initial, const BenchOptions& options,
                                   std::ostream* log);

// Copy of the state with every neighbor list truncated to its first k
// entries; serializes to what a w=k session would store.
EngineState truncate_lists_to_k(const EngineState& state);

double median(std::vector<double> values);

// Fixed schema:
// dataset,n,fraction,trial,t_snnd,t_bisd,t_seq,speedup_snnd,speedup_seq,mem_ratio,verified
void write_csv(std::ostream& out, std::span<const BenchRecord> records, int workers);

}  // namespace snndyn::harness
