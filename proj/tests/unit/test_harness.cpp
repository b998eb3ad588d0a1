#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "harness/bench.hpp"
#include "harness/synthesis.hpp"
#include "snndyn/snapshot.hpp"

using namespace snndyn;
using namespace snndyn::harness;

TEST_CASE("batch synthesis is deterministic in the seed") {
    const Dataset base = make_gaussian_blobs(1000, 2, 5, 7);
    const UpdateBatch a = synthesize_batch(base, 1.0, Workload::Mixed, 99);
    const UpdateBatch b = synthesize_batch(base, 1.0, Workload::Mixed, 99);
    CHECK(a.additions == b.additions);
    CHECK(a.deletions == b.deletions);
    CHECK(a.additions.size() == 10);
    CHECK(a.deletions.size() == 10);

    const UpdateBatch c = synthesize_batch(base, 1.0, Workload::Mixed, 100);
    CHECK(c.additions != a.additions);
}

TEST_CASE("workload picks the change mix") {
    const Dataset base = make_gaussian_blobs(500, 3, 4, 11);
    const UpdateBatch adds = synthesize_batch(base, 2.0, Workload::Add, 1);
    CHECK(adds.additions.size() == 10);
    CHECK(adds.deletions.empty());
    const UpdateBatch dels = synthesize_batch(base, 2.0, Workload::Del, 1);
    CHECK(dels.additions.empty());
    CHECK(dels.deletions.size() == 10);
    for (PointId id : dels.deletions) CHECK(base.contains(id));
    CHECK_THROWS_AS(synthesize_batch(base, 0.0, Workload::Mixed, 1), std::runtime_error);
    CHECK_THROWS_AS(parse_workload("bogus"), std::runtime_error);
}

TEST_CASE("synthesized additions stay near the data") {
    const Dataset base = make_gaussian_blobs(800, 2, 6, 13);
    double lo[2] = {1e300, 1e300};
    double hi[2] = {-1e300, -1e300};
    for (std::size_t i = 0; i < base.size(); ++i) {
        const auto coords = base.point_at(i).coords;
        for (int d = 0; d < 2; ++d) {
            lo[d] = std::min(lo[d], coords[d]);
            hi[d] = std::max(hi[d], coords[d]);
        }
    }
    const UpdateBatch batch = synthesize_batch(base, 5.0, Workload::Add, 3);
    for (const auto& row : batch.additions) {
        for (int d = 0; d < 2; ++d) {
            const double slack = 0.1 * (hi[d] - lo[d]);
            CHECK(row[d] >= lo[d] - slack);
            CHECK(row[d] <= hi[d] + slack);
        }
    }
}

TEST_CASE("truncate_lists_to_k shrinks every list to k entries") {
    const Dataset base = make_gaussian_blobs(200, 2, 3, 17);
    const Params params{5, 10, 2, 2};
    const EngineState state = snnd_cluster(base, params);
    const EngineState narrow = truncate_lists_to_k(state);
    for (const auto& [id, list] : narrow.wlists) {
        CHECK(list.entries.size() == 5);
        CHECK(list.entries ==
              std::vector<NeighborEntry>(state.wlists.at(id).entries.begin(),
                                         state.wlists.at(id).entries.begin() + 5));
    }
    std::ostringstream wide_bytes, narrow_bytes;
    CHECK(save_state(narrow, narrow_bytes) < save_state(state, wide_bytes));
}

TEST_CASE("median of odd and even sample counts") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median({}) == 0.0);
}

TEST_CASE("run_bench measures, verifies, and reports") {
    const Dataset base = make_gaussian_blobs(400, 2, 4, 23);
    BenchOptions options;
    options.dataset_name = "blobs";
    options.params = Params{5, 10, 2, 2};
    options.fractions = {1.0, 5.0};
    options.trials = 2;
    options.seed = 5;
    const EngineState initial = snnd_cluster(base, options.params);

    std::ostringstream log;
    const auto records = run_bench(initial, options, &log);
    REQUIRE(records.size() == 4);
    for (const auto& r : records) {
        CHECK(r.verified);
        CHECK(r.t_snnd > 0.0);
        CHECK(r.t_bisd > 0.0);
        CHECK(r.t_seq > 0.0);
        CHECK(r.mem_ratio >= 1.0);
        CHECK(r.n == 400);
    }
    CHECK(log.str().find("verified=true") != std::string::npos);

    SUBCASE("identical seed reproduces the batches") {
        const auto again = run_bench(initial, options, nullptr);
        for (std::size_t i = 0; i < records.size(); ++i) {
            CHECK(again[i].fraction == records[i].fraction);
            CHECK(again[i].verified);
            CHECK(again[i].mem_ratio == records[i].mem_ratio);  // timings aside, same outputs
        }
    }
    SUBCASE("csv carries the fixed schema") {
        std::ostringstream csv;
        write_csv(csv, records, 2);
        const std::string text = csv.str();
        CHECK(text.find("# workers=2\n") == 0);
        CHECK(text.find("dataset,n,fraction,trial,t_snnd,t_bisd,t_seq,speedup_snnd,"
                        "speedup_seq,mem_ratio,verified") != std::string::npos);
        CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 4);
        CHECK(text.find("blobs,400,1,0,") != std::string::npos);
    }
    SUBCASE("bad options are rejected") {
        BenchOptions bad = options;
        bad.trials = 0;
        CHECK_THROWS_AS(run_bench(initial, bad, nullptr), std::runtime_error);
        bad = options;
        bad.fractions = {150.0};
        CHECK_THROWS_AS(run_bench(initial, bad, nullptr), std::runtime_error);
    }
}
