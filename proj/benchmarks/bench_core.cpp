#include <benchmark/benchmark.h>

#include <sstream>

#include "harness/synthesis.hpp"
#include "snndyn/bisd.hpp"
#include "snndyn/sequential.hpp"
#include "snndyn/snapshot.hpp"

using namespace snndyn;

namespace {

const Params kParams{10, 20, 3, 4};

Dataset blobs(std::size_t n, int dim) { return harness::make_gaussian_blobs(n, dim, 8, 42); }

void BM_BuildNeighborList(benchmark::State& state) {
    const Dataset d = blobs(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        NeighborList list = build_wlist(d, 0, kParams);
        benchmark::DoNotOptimize(list);
    }
}

void BM_SnndCluster(benchmark::State& state) {
    const Dataset d = blobs(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        EngineState clustered = snnd_cluster(d, kParams);
        benchmark::DoNotOptimize(clustered);
    }
}

void BM_BisdUpdate(benchmark::State& state) {
    const Dataset d = blobs(static_cast<std::size_t>(state.range(0)), 5);
    const EngineState initial = snnd_cluster(d, kParams);
    const UpdateBatch batch =
        harness::synthesize_batch(d, 1.0, harness::Workload::Mixed, 7);
    for (auto _ : state) {
        EngineState working = initial;
        bisd_update(working, batch);
        benchmark::DoNotOptimize(working);
    }
}

void BM_SequentialUpdate(benchmark::State& state) {
    const Dataset d = blobs(static_cast<std::size_t>(state.range(0)), 5);
    const EngineState initial = snnd_cluster(d, kParams);
    const UpdateBatch batch =
        harness::synthesize_batch(d, 1.0, harness::Workload::Mixed, 7);
    for (auto _ : state) {
        EngineState working = initial;
        sequential_update(working, batch);
        benchmark::DoNotOptimize(working);
    }
}

void BM_SnapshotRoundTrip(benchmark::State& state) {
    const Dataset d = blobs(static_cast<std::size_t>(state.range(0)), 5);
    const EngineState clustered = snnd_cluster(d, kParams);
    for (auto _ : state) {
        std::stringstream buffer;
        save_state(clustered, buffer);
        EngineState loaded = load_state(buffer);
        benchmark::DoNotOptimize(loaded);
    }
}

}  // namespace

BENCHMARK(BM_BuildNeighborList)->Arg(2000)->Arg(8000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SnndCluster)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BisdUpdate)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SequentialUpdate)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SnapshotRoundTrip)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
