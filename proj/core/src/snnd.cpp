#include "snndyn/snnd.hpp"

#include <stdexcept>
#include <string>

#include "snndyn/concurrency.hpp"

namespace snndyn {

std::unordered_map<PointId, std::vector<PointId>> topk_lists(const EngineState& state) {
    std::unordered_map<PointId, std::vector<PointId>> klists;
    klists.reserve(state.wlists.size());
    for (const auto& [id, list] : state.wlists)
        klists.emplace(id, list.topk(state.params.k));
    return klists;
}

void recluster(EngineState& state) {
    const IdSet cores = label_cores(state.graph, state.params);
    state.assignment = cluster_graph(state.graph, cores, state.dataset.ids());
}

EngineState snnd_cluster(const Dataset& dataset, const Params& params) {
    params.validate();
    const std::size_t n = dataset.size();
    if (n < static_cast<std::size_t>(params.k) + 1)
        throw std::runtime_error("dataset too small for k");
    if (static_cast<std::size_t>(params.core_threshold) > n - 1)
        throw std::runtime_error("core_threshold exceeds n-1");

    EngineState state;
    state.dataset = dataset;
    state.params = params;

    std::vector<NeighborList> lists(n);
    parallel_for(n, [&](std::size_t i) {
        lists[i] = build_wlist(state.dataset, state.dataset.ids()[i], params);
    });
    state.wlists.reserve(n);
    for (auto& list : lists) {
        const PointId owner = list.owner;
        state.wlists.emplace(owner, std::move(list));
    }

    state.graph = build_snn_graph(topk_lists(state), params);
    recluster(state);
    return state;
}

}  // namespace snndyn
