#include <doctest.h>

#include <stdexcept>

#include <map>
#include <random>

#include "snndyn/bisd.hpp"
#include "support/oracles.hpp"

using namespace snndyn;

namespace {

// One point with four close neighbors at hand-picked distances, plus a far
// cloud so the dataset is big enough for batches. 1-D, so distances are the
// coordinates themselves. p1..p5 get ids 0..4.
EngineState scenario_state() {
    Dataset d(1);
    for (double x : {0.0, 5.0, 10.0, 20.0, 30.0}) d.add_point(std::vector<double>{x});
    for (int i = 0; i < 20; ++i) d.add_point(std::vector<double>{10000.0 + 5.0 * i});
    return snnd_cluster(d, Params{2, 4, 1, 1});
}

std::vector<PointId> entry_ids(const NeighborList& list) {
    std::vector<PointId> ids;
    for (const auto& e : list.entries) ids.push_back(e.id);
    return ids;
}

void check_against_rebuild(const EngineState& state) {
    const EngineState oracle = snnd_cluster(state.dataset, state.params);
    CHECK(state.graph == oracle.graph);
    CHECK(state.assignment == oracle.assignment);
    CHECK(state.graph.symmetric_and_simple());
}

}  // namespace

TEST_CASE("insertion phase reshapes the scenario list and flags p1") {
    EngineState state = scenario_state();
    const PointId p1 = 0, p2 = 1, p3 = 2;
    CHECK(entry_ids(state.wlists.at(p1)) == std::vector<PointId>{1, 2, 3, 4});

    SUBCASE("all four inserts move the top-k") {
        const auto outcome = insertion_phase(
            state, {{40.0}, {15.0}, {25.0}, {2.0}});  // n1..n4, ids 25..28
        REQUIRE(outcome.new_ids == std::vector<PointId>{25, 26, 27, 28});
        const PointId n2 = 26, n4 = 28;
        CHECK(entry_ids(state.wlists.at(p1)) == std::vector<PointId>{n4, p2, p3, n2});
        CHECK(state.wlists.at(p1).topk(2) == std::vector<PointId>{n4, p2});
        CHECK(outcome.t1_add.count(p1) == 1);

        SUBCASE("deleting down to one entry forces a rebuild") {
            const auto del = deletion_phase(state, {n2, p2, p3});
            CHECK(del.t1_del.count(p1) == 1);
            // rebuilt to full length over the post-deletion dataset
            CHECK(entry_ids(state.wlists.at(p1)) == std::vector<PointId>{28, 3, 27, 4});
        }
        SUBCASE("a truncated list can still serve the top-k") {
            const auto del = deletion_phase(state, {n2, p2});
            CHECK(del.t1_del.count(p1) == 1);
            CHECK(entry_ids(state.wlists.at(p1)) == std::vector<PointId>{28, 2});
        }
        SUBCASE("deletions past the top-k leave p1 unaffected") {
            const auto del = deletion_phase(state, {p3});
            CHECK(del.t1_del.count(p1) == 0);
            CHECK(entry_ids(state.wlists.at(p1)) == std::vector<PointId>{28, 1, 26});
        }
    }
    SUBCASE("two far inserts leave the top-k alone") {
        const auto outcome = insertion_phase(state, {{40.0}, {25.0}});
        CHECK(entry_ids(state.wlists.at(p1)) == std::vector<PointId>{1, 2, 3, 26});
        CHECK(state.wlists.at(p1).topk(2) == std::vector<PointId>{1, 2});
        CHECK(outcome.t1_add.count(p1) == 0);
    }
}

TEST_CASE("insertions beyond every list tail affect nobody") {
    Dataset d(1);
    for (double x : {0.0, 1.0, 2.0, 10.0, 11.0, 12.0}) d.add_point(std::vector<double>{x});
    EngineState state = snnd_cluster(d, Params{2, 4, 1, 2});
    const auto outcome = insertion_phase(state, {{1e6}, {1e6 + 1.0}});
    CHECK(outcome.t1_add.empty());
    CHECK(outcome.t2_add.empty());
    CHECK(state.wlists.count(6) == 1);
    CHECK(state.wlists.count(7) == 1);
}

TEST_CASE("empty phases do not mutate the state") {
    EngineState state = scenario_state();
    const EngineState before = state;
    const auto ins = insertion_phase(state, {});
    CHECK(ins.new_ids.empty());
    const auto del = deletion_phase(state, {});
    CHECK(del.t1_del.empty());
    CHECK(state == before);
}

TEST_CASE("deletion phase validates ids before mutating") {
    EngineState state = scenario_state();
    const EngineState before = state;
    CHECK_THROWS_WITH_AS(deletion_phase(state, {12345}), doctest::Contains("12345"),
                         std::runtime_error);
    CHECK(state == before);
}

TEST_CASE("combine_affected applies the set algebra") {
    SUBCASE("deleted points drop out of t1") {
        const auto sets = combine_affected({7}, {}, {8}, {}, {}, {8});
        CHECK(sets.t1 == IdSet{7});
        CHECK(sets.t2.empty());
    }
    SUBCASE("t1 wins over t2") {
        const auto sets = combine_affected({}, {7}, {7}, {}, {}, {});
        CHECK(sets.t1 == IdSet{7});
        CHECK(sets.t2.empty());
    }
    SUBCASE("all empty") {
        const auto sets = combine_affected({}, {}, {}, {}, {}, {});
        CHECK(sets.t1.empty());
        CHECK(sets.t2.empty());
    }
}

TEST_CASE("update_snn_graph with no changes is a no-op") {
    EngineState state = scenario_state();
    const SnnGraph before = state.graph;
    AffectedSets nothing;
    update_snn_graph(state, nothing);
    CHECK(state.graph == before);
}

TEST_CASE("removing a vertex removes its mirror entries") {
    Dataset d(1);
    for (double x : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) d.add_point(std::vector<double>{x});
    EngineState state = snnd_cluster(d, Params{3, 5, 0, 1});
    REQUIRE(state.graph.degree(2) > 0);
    bisd_update(state, UpdateBatch{{}, {2}});
    CHECK_FALSE(state.graph.has_vertex(2));
    CHECK(state.graph.symmetric_and_simple());
    check_against_rebuild(state);
}

TEST_CASE("bisd_update handles an empty batch") {
    EngineState state = scenario_state();
    const ClusterAssignment before = state.assignment;
    const auto affected = bisd_update(state, UpdateBatch{});
    CHECK(state.assignment == before);
    CHECK(affected.t1.empty());
    CHECK(affected.t2.empty());
}

TEST_CASE("bisd_update validates before mutating") {
    EngineState state = scenario_state();
    const EngineState before = state;
    SUBCASE("unknown deletion id") {
        UpdateBatch batch;
        batch.deletions = {4242};
        CHECK_THROWS_AS(bisd_update(state, batch), std::runtime_error);
        CHECK(state == before);
    }
    SUBCASE("batch that would empty the dataset") {
        UpdateBatch batch;
        for (PointId id : state.dataset.ids())
            if (id > 1) batch.deletions.insert(id);
        CHECK_THROWS_WITH_AS(bisd_update(state, batch),
                             doctest::Contains("dataset too small after deletions"),
                             std::runtime_error);
        CHECK(state == before);
    }
}

TEST_CASE("bisd_update matches the from-scratch pipeline on random batches") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 100 + rng() % 120;
        const int dim = 2 + static_cast<int>(rng() % 2);
        const Dataset d = oracles::random_dataset(rng, n, dim);
        const int k = 4 + static_cast<int>(rng() % 4);
        const Params params{k, k + static_cast<int>(rng() % (2 * k)),
                            static_cast<int>(rng() % (k + 1)),
                            static_cast<int>(rng() % (k + 1))};
        EngineState state = snnd_cluster(d, params);
        for (int round = 0; round < 2; ++round) {
            const UpdateBatch batch = oracles::random_batch(rng, state.dataset, 4.0, 4.0);
            const SnnGraph old_graph = state.graph;
            const AffectedSets affected = bisd_update(state, batch);
            check_against_rebuild(state);

            // every changed edge touches t1, a new point, or a deleted point
            IdSet recompute(affected.t1.begin(), affected.t1.end());
            recompute.insert(affected.new_ids.begin(), affected.new_ids.end());
            std::map<std::pair<PointId, PointId>, int> old_edges, new_edges;
            for (const auto& [a, b, weight] : old_graph.canonical_edges())
                old_edges[{a, b}] = weight;
            for (const auto& [a, b, weight] : state.graph.canonical_edges())
                new_edges[{a, b}] = weight;
            for (const auto& [edge, weight] : old_edges) {
                const auto it = new_edges.find(edge);
                if (it != new_edges.end() && it->second == weight) continue;
                const bool covered = recompute.count(edge.first) ||
                                     recompute.count(edge.second) ||
                                     affected.deleted_ids.count(edge.first) ||
                                     affected.deleted_ids.count(edge.second);
                CHECK(covered);
            }
            for (const auto& [edge, weight] : new_edges) {
                if (old_edges.count(edge)) continue;
                CHECK((recompute.count(edge.first) || recompute.count(edge.second)));
            }
        }
    }
}

TEST_CASE("re-inserting a far outlier's coordinates changes only the new point") {
    // two tight groups plus one isolated point
    Dataset d(2);
    std::mt19937_64 rng(73);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int i = 0; i < 15; ++i) d.add_point(std::vector<double>{noise(rng), noise(rng)});
    for (int i = 0; i < 15; ++i)
        d.add_point(std::vector<double>{50.0 + noise(rng), 50.0 + noise(rng)});
    const PointId loner = d.add_point(std::vector<double>{500.0, 500.0});

    const Params params{3, 6, 1, 2};
    EngineState state = snnd_cluster(d, params);
    REQUIRE(state.assignment.points.at(loner).label == kOutlier);
    const ClusterAssignment before = state.assignment;

    UpdateBatch batch;
    batch.additions = {{500.0, 500.0}};
    bisd_update(state, batch);
    check_against_rebuild(state);
    for (const auto& [id, pa] : before.points) CHECK(state.assignment.points.at(id) == pa);
}

TEST_CASE("a batch followed by its inverse restores the clustering") {
    std::mt19937_64 rng(79);
    const Dataset d = oracles::random_dataset(rng, 150, 2);
    const Params params{5, 10, 2, 3};
    EngineState state = snnd_cluster(d, params);
    const ClusterAssignment original = state.assignment;

    const UpdateBatch batch = oracles::random_batch(rng, state.dataset, 5.0, 5.0);
    std::map<PointId, std::vector<double>> deleted_coords;
    for (PointId id : sorted_ids(batch.deletions)) {
        const auto coords = d.point(id).coords;
        deleted_coords.emplace(id, std::vector<double>(coords.begin(), coords.end()));
    }
    const AffectedSets affected = bisd_update(state, batch);

    UpdateBatch inverse;
    for (const auto& [id, coords] : deleted_coords) inverse.additions.push_back(coords);
    inverse.deletions.insert(affected.new_ids.begin(), affected.new_ids.end());
    bisd_update(state, inverse);
    check_against_rebuild(state);

    // map the re-added points back onto the ids they replace (coordinates
    // are generic, so the match is unambiguous)
    std::map<std::vector<double>, PointId> readded;
    for (PointId id : state.dataset.ids()) {
        if (!original.points.count(id)) {
            const auto coords = state.dataset.point(id).coords;
            readded.emplace(std::vector<double>(coords.begin(), coords.end()), id);
        }
    }
    ClusterAssignment translated;
    for (const auto& [id, pa] : original.points) {
        if (state.assignment.points.count(id)) {
            translated.points.emplace(id, state.assignment.points.at(id));
        } else {
            const PointId stand_in = readded.at(deleted_coords.at(id));
            translated.points.emplace(id, state.assignment.points.at(stand_in));
        }
    }
    CHECK(labels_isomorphic(original, translated));
}
