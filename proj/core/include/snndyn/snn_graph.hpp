#pragma once

#include <iosfwd>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "snndyn/dataset.hpp"
#include "snndyn/params.hpp"

namespace snndyn {

// Weighted undirected simple graph over the current point ids. Only edges
// whose weight reaches sim_threshold are stored. Every current point is a
// vertex, isolated ones included; adjacency lists stay sorted by neighbor id.
class SnnGraph {
public:
    struct Edge {
        PointId neighbor = -1;
        int weight = 0;

        bool operator==(const Edge&) const = default;
    };

    void add_vertex(PointId id);     // throws std::logic_error if present
    void remove_vertex(PointId id);  // drops incident edges on both sides
    bool has_vertex(PointId id) const;

    void set_edge(PointId a, PointId b, int weight);  // insert or overwrite
    bool remove_edge(PointId a, PointId b);           // returns whether it existed
    void clear_vertex_edges(PointId id);              // mirrors removed too

    const std::vector<Edge>& neighbors(PointId id) const;
    int degree(PointId id) const;

    std::size_t vertex_count() const noexcept { return adj_.size(); }
    std::size_t edge_count() const;
    std::vector<PointId> vertex_ids_sorted() const;

    // Undirected edges with the lower id first, sorted; the canonical form
    // used by snapshots, diffs, and equality.
    std::vector<std::tuple<PointId, PointId, int>> canonical_edges() const;

    // Full-scan invariant check used by tests.
    bool symmetric_and_simple() const;

    bool operator==(const SnnGraph&) const = default;

private:
    std::unordered_map<PointId, std::vector<Edge>> adj_;
};

// Shared-neighbor count between two k-lists, excluding the endpoints
// themselves from the intersection.
int snn_similarity(std::span<const PointId> kp, std::span<const PointId> kq,
                   PointId p, PointId q);

// Jarvis-Patrick rule with similarity thresholding: an edge exists iff the
// endpoints appear in each other's k-list and their shared-neighbor count
// reaches sim_threshold. klists must cover every current point.
SnnGraph build_snn_graph(const std::unordered_map<PointId, std::vector<PointId>>& klists,
                         const Params& params);

// Core points: thresholded degree >= core_threshold.
IdSet label_cores(const SnnGraph& graph, const Params& params);

inline constexpr PointId kOutlier = -1;

struct PointAssignment {
    PointId label = kOutlier;  // canonical: smallest core id in the cluster
    bool is_core = false;

    bool operator==(const PointAssignment&) const = default;
};

// Cluster membership for every current point. Labels are canonicalized to
// the minimum core id per cluster, making equal clusterings byte-equal.
struct ClusterAssignment {
    std::unordered_map<PointId, PointAssignment> points;

    std::size_t cluster_count() const;
    std::size_t outlier_count() const;

    bool operator==(const ClusterAssignment&) const = default;
};

// Connected components of the core-core subgraph become clusters; non-core
// vertices join the cluster of their strongest-linked core (ties broken by
// smallest core id); everything else is an outlier.
ClusterAssignment cluster_graph(const SnnGraph& graph, const IdSet& cores,
                                const std::vector<PointId>& all_ids);

// True iff the outlier sets match and a label bijection exists. Throws
// std::logic_error when the id sets differ.
bool labels_isomorphic(const ClusterAssignment& a, const ClusterAssignment& b);

// `<id> <label|OUTLIER>` per line, ascending id.
void write_labels(std::ostream& out, const ClusterAssignment& assignment);

}  // namespace snndyn
