#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "harness/bench.hpp"
#include "harness/synthesis.hpp"
#include "snndyn/bisd.hpp"
#include "snndyn/concurrency.hpp"
#include "snndyn/sequential.hpp"
#include "snndyn/snapshot.hpp"

namespace {

using namespace snndyn;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

Dataset load_points_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return load_points(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

EngineState load_state_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return load_state(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void save_state_file(const EngineState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    save_state(state, out);
}

void save_labels_file(const EngineState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    write_labels(out, state.assignment);
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string dataset_stem(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name.empty() ? "dataset" : name;
}

struct ParamFlags {
    std::optional<int> k, w, sim_threshold, core_threshold;

    Params require() const {
        if (!k || !w || !sim_threshold || !core_threshold)
            throw std::runtime_error("missing parameters: --k, --w, --sim-th, --core-th");
        Params params{*k, *w, *sim_threshold, *core_threshold};
        params.validate();
        return params;
    }

    void check_match(const Params& from_state) const {
        const bool mismatch = (k && *k != from_state.k) || (w && *w != from_state.w) ||
                              (sim_threshold && *sim_threshold != from_state.sim_threshold) ||
                              (core_threshold && *core_threshold != from_state.core_threshold);
        if (mismatch)
            throw std::runtime_error(
                "param mismatch: snapshot was built with k=" + std::to_string(from_state.k) +
                " w=" + std::to_string(from_state.w) +
                " sim-th=" + std::to_string(from_state.sim_threshold) +
                " core-th=" + std::to_string(from_state.core_threshold));
    }
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
    cmd->add_option("--k", flags.k, "KNN list size");
    cmd->add_option("--w", flags.w, "extended neighbor list size (>= k)");
    cmd->add_option("--sim-th", flags.sim_threshold, "similarity threshold");
    cmd->add_option("--core-th", flags.core_threshold, "core degree threshold");
}

int run_cluster(const std::string& input, const ParamFlags& flags, const std::string& state_out,
                const std::string& labels_out) {
    const Params params = flags.require();
    const Dataset dataset = load_points_file(input);

    const auto start = std::chrono::steady_clock::now();
    const EngineState state = snnd_cluster(dataset, params);
    const double elapsed = seconds_since(start);

    save_state_file(state, state_out);
    save_labels_file(state, labels_out);
    std::cout << "points=" << state.dataset.size()
              << " clusters=" << state.assignment.cluster_count()
              << " outliers=" << state.assignment.outlier_count() << " elapsed=" << elapsed
              << "s\n";
    return 0;
}

int run_update(const std::string& state_in, const std::string& add_path,
               const std::string& del_path, const ParamFlags& flags, const std::string& mode,
               const std::string& state_out, const std::string& labels_out) {
    if (add_path.empty() && del_path.empty())
        throw std::runtime_error("update needs at least one of --add or --del");

    EngineState state = load_state_file(state_in);
    flags.check_match(state.params);

    UpdateBatch batch;
    if (!add_path.empty()) {
        auto in = open_input(add_path);
        try {
            batch.additions = load_rows(in, state.dataset.dim());
        } catch (const std::exception& e) {
            throw std::runtime_error(add_path + ": " + e.what());
        }
    }
    if (!del_path.empty()) {
        auto in = open_input(del_path);
        try {
            const auto ids = load_id_list(in);
            batch.deletions.insert(ids.begin(), ids.end());
        } catch (const std::exception& e) {
            throw std::runtime_error(del_path + ": " + e.what());
        }
    }

    std::size_t t1_size = 0;
    std::size_t t2_size = 0;
    const auto start = std::chrono::steady_clock::now();
    if (mode == "batch") {
        const AffectedSets affected = bisd_update(state, batch);
        t1_size = affected.t1.size();
        t2_size = affected.t2.size();
    } else {
        const SequentialStats stats = sequential_update(state, batch);
        t1_size = stats.t1_total;  // summed over the singleton updates
        t2_size = stats.t2_total;
    }
    const double elapsed = seconds_since(start);

    save_state_file(state, state_out);
    save_labels_file(state, labels_out);
    std::cout << "mode=" << mode << " added=" << batch.additions.size()
              << " deleted=" << batch.deletions.size() << " t1=" << t1_size << " t2=" << t2_size
              << " points=" << state.dataset.size()
              << " clusters=" << state.assignment.cluster_count()
              << " outliers=" << state.assignment.outlier_count() << " elapsed=" << elapsed
              << "s\n";
    return 0;
}

int run_verify(const std::string& state_path, const std::string& input) {
    const EngineState state = load_state_file(state_path);

    // The provided file must contain exactly the points the snapshot holds.
    auto in = open_input(input);
    auto rows = load_rows(in, state.dataset.dim());
    std::vector<std::vector<double>> held;
    held.reserve(state.dataset.size());
    for (PointId id : state.dataset.ids()) {
        const auto coords = state.dataset.point(id).coords;
        held.emplace_back(coords.begin(), coords.end());
    }
    std::sort(rows.begin(), rows.end());
    std::sort(held.begin(), held.end());
    if (rows != held)
        throw std::runtime_error(input + " does not match the snapshot's dataset");

    const EngineState oracle = snnd_cluster(state.dataset, state.params);
    const bool labels_ok = labels_isomorphic(state.assignment, oracle.assignment);
    const auto stored_edges = state.graph.canonical_edges();
    const auto oracle_edges = oracle.graph.canonical_edges();
    const bool graph_ok = stored_edges == oracle_edges;

    std::cout << "labels=" << (labels_ok ? "isomorphic" : "MISMATCH")
              << " graph=" << (graph_ok ? "equal" : "MISMATCH") << '\n';
    if (labels_ok && graph_ok) return 0;

    if (!labels_ok) {
        int shown = 0;
        for (PointId id : state.dataset.ids()) {
            const auto& got = state.assignment.points.at(id);
            const auto& want = oracle.assignment.points.at(id);
            if (got == want) continue;
            std::cout << "point " << id << ": stored label "
                      << (got.label == kOutlier ? std::string("OUTLIER")
                                                : std::to_string(got.label))
                      << ", expected "
                      << (want.label == kOutlier ? std::string("OUTLIER")
                                                 : std::to_string(want.label))
                      << '\n';
            if (++shown == 10) break;
        }
    }
    if (!graph_ok) {
        std::vector<std::tuple<PointId, PointId, int>> diff;
        std::set_symmetric_difference(stored_edges.begin(), stored_edges.end(),
                                      oracle_edges.begin(), oracle_edges.end(),
                                      std::back_inserter(diff));
        for (std::size_t i = 0; i < diff.size() && i < 10; ++i) {
            const auto& [a, b, weight] = diff[i];
            std::cout << "edge " << a << "-" << b << " weight " << weight << " differs\n";
        }
    }
    return 1;
}

int run_bench(const std::string& input, const ParamFlags& flags,
              const std::vector<double>& fractions, int trials, std::uint64_t seed,
              const std::string& workload_name, const std::string& csv_out) {
    harness::BenchOptions options;
    options.dataset_name = dataset_stem(input);
    options.params = flags.require();
    options.fractions = fractions;
    options.trials = trials;
    options.seed = seed;
    options.workload = harness::parse_workload(workload_name);

    const Dataset base = load_points_file(input);
    std::cout << "base points=" << base.size() << " dim=" << base.dim()
              << " workers=" << max_workers() << '\n';

    const auto setup_start = std::chrono::steady_clock::now();
    const EngineState initial = snnd_cluster(base, options.params);
    std::cout << "initial clustering: " << seconds_since(setup_start) << "s, clusters="
              << initial.assignment.cluster_count() << '\n';

    const auto records = harness::run_bench(initial, options, &std::cout);

    std::ofstream csv(csv_out);
    if (!csv) throw std::runtime_error("cannot open file for writing: " + csv_out);
    harness::write_csv(csv, records, max_workers());

    for (double fraction : options.fractions) {
        std::vector<double> snnd_speedups;
        std::vector<double> seq_speedups;
        for (const auto& r : records) {
            if (r.fraction != fraction) continue;
            snnd_speedups.push_back(r.speedup_snnd);
            seq_speedups.push_back(r.speedup_seq);
        }
        std::cout << "fraction=" << fraction
                  << " median_speedup_snnd=" << harness::median(snnd_speedups)
                  << " median_speedup_seq=" << harness::median(seq_speedups) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shared-nearest-neighbor density clustering for dynamic datasets"};
    app.require_subcommand(1);

    std::string input;
    std::string state_in;
    std::string state_out;
    std::string labels_out;
    std::string add_path;
    std::string del_path;
    std::string mode = "batch";
    std::string workload = "mixed";
    std::string csv_out;
    std::vector<double> fractions{1, 2, 5, 10};
    int trials = 3;
    std::uint64_t seed = 1;
    ParamFlags flags;

    auto* cluster = app.add_subcommand("cluster", "Cluster a dataset from scratch");
    cluster->add_option("--input", input, "points file")->required();
    add_param_flags(cluster, flags);
    cluster->add_option("--state-out", state_out, "snapshot output path")->required();
    cluster->add_option("--labels", labels_out, "label file output path")->required();

    auto* update = app.add_subcommand("update", "Apply an add/delete batch to a snapshot");
    update->add_option("--state", state_in, "snapshot to start from")->required();
    update->add_option("--add", add_path, "points file with additions");
    update->add_option("--del", del_path, "file with one id to delete per line");
    add_param_flags(update, flags);
    update->add_option("--mode", mode, "batch|sequential")
        ->check(CLI::IsMember({"batch", "sequential"}));
    update->add_option("--state-out", state_out, "snapshot output path")->required();
    update->add_option("--labels", labels_out, "label file output path")->required();

    auto* verify = app.add_subcommand("verify", "Check a snapshot against a from-scratch run");
    verify->add_option("--state", state_in, "snapshot to verify")->required();
    verify->add_option("--input", input, "file holding the snapshot's points")->required();

    auto* bench = app.add_subcommand("bench", "Measure speedup over the from-scratch pipeline");
    bench->add_option("--input", input, "base points file")->required();
    add_param_flags(bench, flags);
    bench->add_option("--fractions", fractions, "batch sizes as percent of the base")
        ->delimiter(',');
    bench->add_option("--trials", trials, "trials per fraction");
    bench->add_option("--seed", seed, "batch synthesis seed");
    bench->add_option("--workload", workload, "add|del|mixed")
        ->check(CLI::IsMember({"add", "del", "mixed"}));
    bench->add_option("--csv", csv_out, "CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(cluster))
            return run_cluster(input, flags, state_out, labels_out);
        if (app.got_subcommand(update))
            return run_update(state_in, add_path, del_path, flags, mode, state_out, labels_out);
        if (app.got_subcommand(verify)) return run_verify(state_in, input);
        if (app.got_subcommand(bench))
            return run_bench(input, flags, fractions, trials, seed, workload, csv_out);
    } catch (const snndyn::harness::VerificationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
