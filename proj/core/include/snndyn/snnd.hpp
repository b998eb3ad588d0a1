#pragma once

#include <unordered_map>

#include "snndyn/dataset.hpp"
#include "snndyn/neighbor_list.hpp"
#include "snndyn/params.hpp"
#include "snndyn/snn_graph.hpp"

namespace snndyn {

// Everything a clustering session keeps between updates: the evolving
// dataset, the extended neighbor lists, the SNN graph, and the current
// cluster membership. Exclusively owned during an update.
struct EngineState {
    Dataset dataset;
    Params params;
    std::unordered_map<PointId, NeighborList> wlists;
    SnnGraph graph;
    ClusterAssignment assignment;

    bool operator==(const EngineState&) const = default;
};

// From-scratch pipeline: builds full w-length lists for every point, the SNN
// graph over their top-k slices, and the clustering. Deterministic for any
// worker count. Requires more than k points.
EngineState snnd_cluster(const Dataset& dataset, const Params& params);

// Recomputes cores and cluster membership from the current graph. Shared by
// the static and incremental paths so both produce identical labels.
void recluster(EngineState& state);

// Top-k id slices of all current w-lists.
std::unordered_map<PointId, std::vector<PointId>> topk_lists(const EngineState& state);

}  // namespace snndyn
