#include "snndyn/snn_graph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace snndyn {

namespace {

std::vector<SnnGraph::Edge>::iterator find_slot(std::vector<SnnGraph::Edge>& edges,
                                                PointId neighbor) {
    return std::lower_bound(edges.begin(), edges.end(), neighbor,
                            [](const SnnGraph::Edge& e, PointId id) { return e.neighbor < id; });
}

// Intersection size of two sorted id lists, skipping the endpoints.
int shared_count_sorted(std::span<const PointId> a, std::span<const PointId> b, PointId p,
                        PointId q) {
    int count = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == p || a[i] == q) {
            ++i;
        } else if (b[j] == p || b[j] == q) {
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

// Union-find over core ids with path halving.
struct CoreForest {
    std::unordered_map<PointId, PointId> parent;

    explicit CoreForest(const IdSet& cores) {
        parent.reserve(cores.size());
        for (PointId c : cores) parent.emplace(c, c);
    }

    PointId find(PointId x) {
        auto it = parent.find(x);
        while (it->second != x) {
            const auto grand = parent.find(it->second);
            it->second = grand->second;
            x = it->second;
            it = parent.find(x);
        }
        return x;
    }

    void unite(PointId a, PointId b) {
        const PointId ra = find(a);
        const PointId rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
};

}  // namespace

void SnnGraph::add_vertex(PointId id) {
    const auto [it, inserted] = adj_.emplace(id, std::vector<Edge>{});
    (void)it;
    if (!inserted)
        throw std::logic_error("SnnGraph: vertex " + std::to_string(id) + " already present");
}

void SnnGraph::remove_vertex(PointId id) {
    const auto it = adj_.find(id);
    if (it == adj_.end())
        throw std::logic_error("SnnGraph: unknown vertex " + std::to_string(id));
    for (const Edge& e : it->second) {
        auto& mirror = adj_.at(e.neighbor);
        const auto slot = find_slot(mirror, id);
        mirror.erase(slot);
    }
    adj_.erase(it);
}

bool SnnGraph::has_vertex(PointId id) const { return adj_.find(id) != adj_.end(); }

void SnnGraph::set_edge(PointId a, PointId b, int weight) {
    if (a == b) throw std::logic_error("SnnGraph: self edge");
    auto& ea = adj_.at(a);
    auto& eb = adj_.at(b);
    const auto slot_a = find_slot(ea, b);
    if (slot_a != ea.end() && slot_a->neighbor == b)
        slot_a->weight = weight;
    else
        ea.insert(slot_a, Edge{b, weight});
    const auto slot_b = find_slot(eb, a);
    if (slot_b != eb.end() && slot_b->neighbor == a)
        slot_b->weight = weight;
    else
        eb.insert(slot_b, Edge{a, weight});
}

bool SnnGraph::remove_edge(PointId a, PointId b) {
    auto& ea = adj_.at(a);
    const auto slot_a = find_slot(ea, b);
    if (slot_a == ea.end() || slot_a->neighbor != b) return false;
    ea.erase(slot_a);
    auto& eb = adj_.at(b);
    eb.erase(find_slot(eb, a));
    return true;
}

void SnnGraph::clear_vertex_edges(PointId id) {
    auto& edges = adj_.at(id);
    for (const Edge& e : edges) {
        auto& mirror = adj_.at(e.neighbor);
        mirror.erase(find_slot(mirror, id));
    }
    edges.clear();
}

const std::vector<SnnGraph::Edge>& SnnGraph::neighbors(PointId id) const {
    const auto it = adj_.find(id);
    if (it == adj_.end())
        throw std::logic_error("SnnGraph: unknown vertex " + std::to_string(id));
    return it->second;
}

int SnnGraph::degree(PointId id) const { return static_cast<int>(neighbors(id).size()); }

std::size_t SnnGraph::edge_count() const {
    std::size_t half_edges = 0;
    for (const auto& [id, edges] : adj_) half_edges += edges.size();
    return half_edges / 2;
}

std::vector<PointId> SnnGraph::vertex_ids_sorted() const {
    std::vector<PointId> ids;
    ids.reserve(adj_.size());
    for (const auto& [id, edges] : adj_) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::tuple<PointId, PointId, int>> SnnGraph::canonical_edges() const {
    std::vector<std::tuple<PointId, PointId, int>> edges;
    edges.reserve(edge_count());
    for (const auto& [id, adj] : adj_)
        for (const Edge& e : adj)
            if (id < e.neighbor) edges.emplace_back(id, e.neighbor, e.weight);
    std::sort(edges.begin(), edges.end());
    return edges;
}

bool SnnGraph::symmetric_and_simple() const {
    for (const auto& [id, edges] : adj_) {
        PointId prev = -1;
        for (const Edge& e : edges) {
            if (e.neighbor == id) return false;
            if (prev >= 0 && e.neighbor <= prev) return false;  // sorted, no duplicates
            prev = e.neighbor;
            const auto it = adj_.find(e.neighbor);
            if (it == adj_.end()) return false;
            const auto& mirror = it->second;
            const auto slot = std::lower_bound(
                mirror.begin(), mirror.end(), id,
                [](const Edge& m, PointId want) { return m.neighbor < want; });
            if (slot == mirror.end() || slot->neighbor != id || slot->weight != e.weight)
                return false;
        }
    }
    return true;
}

int snn_similarity(std::span<const PointId> kp, std::span<const PointId> kq, PointId p,
                   PointId q) {
    std::vector<PointId> a(kp.begin(), kp.end());
    std::vector<PointId> b(kq.begin(), kq.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return shared_count_sorted(a, b, p, q);
}

SnnGraph build_snn_graph(const std::unordered_map<PointId, std::vector<PointId>>& klists,
                         const Params& params) {
    params.validate();
    SnnGraph graph;
    std::vector<PointId> ids;
    ids.reserve(klists.size());
    for (const auto& [id, list] : klists) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (PointId id : ids) graph.add_vertex(id);

    std::unordered_map<PointId, std::vector<PointId>> sorted_k;
    sorted_k.reserve(klists.size());
    for (const auto& [id, list] : klists) {
        auto copy = list;
        std::sort(copy.begin(), copy.end());
        sorted_k.emplace(id, std::move(copy));
    }

    // Each mutual pair is examined once, from its smaller endpoint.
    for (PointId p : ids) {
        const auto& kp_sorted = sorted_k.at(p);
        for (PointId q : klists.at(p)) {
            if (q <= p) continue;
            const auto it = sorted_k.find(q);
            if (it == sorted_k.end())
                throw std::logic_error("build_snn_graph: k-list references unknown point " +
                                       std::to_string(q));
            const auto& kq_sorted = it->second;
            if (!std::binary_search(kq_sorted.begin(), kq_sorted.end(), p)) continue;
            const int weight = shared_count_sorted(kp_sorted, kq_sorted, p, q);
            if (weight >= params.sim_threshold) graph.set_edge(p, q, weight);
        }
    }
    return graph;
}

IdSet label_cores(const SnnGraph& graph, const Params& params) {
    IdSet cores;
    for (PointId id : graph.vertex_ids_sorted())
        if (graph.degree(id) >= params.core_threshold) cores.insert(id);
    return cores;
}

std::size_t ClusterAssignment::cluster_count() const {
    IdSet labels;
    for (const auto& [id, pa] : points)
        if (pa.label != kOutlier) labels.insert(pa.label);
    return labels.size();
}

std::size_t ClusterAssignment::outlier_count() const {
    std::size_t count = 0;
    for (const auto& [id, pa] : points)
        if (pa.label == kOutlier) ++count;
    return count;
}

ClusterAssignment cluster_graph(const SnnGraph& graph, const IdSet& cores,
                                const std::vector<PointId>& all_ids) {
    CoreForest forest(cores);
    for (PointId c : cores)
        for (const SnnGraph::Edge& e : graph.neighbors(c))
            if (e.neighbor > c && cores.count(e.neighbor)) forest.unite(c, e.neighbor);

    // Canonical cluster label: the smallest core id in the component.
    std::unordered_map<PointId, PointId> component_label;
    for (PointId c : cores) {
        const PointId root = forest.find(c);
        const auto it = component_label.find(root);
        if (it == component_label.end())
            component_label.emplace(root, c);
        else if (c < it->second)
            it->second = c;
    }

    ClusterAssignment assignment;
    assignment.points.reserve(all_ids.size());
    for (PointId id : all_ids) {
        PointAssignment pa;
        if (cores.count(id)) {
            pa.is_core = true;
            pa.label = component_label.at(forest.find(id));
        } else {
            // Strongest link to a core; ties go to the smallest core id.
            PointId best_core = -1;
            int best_weight = -1;
            for (const SnnGraph::Edge& e : graph.neighbors(id)) {
                if (!cores.count(e.neighbor)) continue;
                if (e.weight > best_weight ||
                    (e.weight == best_weight && e.neighbor < best_core)) {
                    best_weight = e.weight;
                    best_core = e.neighbor;
                }
            }
            if (best_core >= 0) pa.label = component_label.at(forest.find(best_core));
        }
        assignment.points.emplace(id, pa);
    }
    return assignment;
}

bool labels_isomorphic(const ClusterAssignment& a, const ClusterAssignment& b) {
    if (a.points.size() != b.points.size())
        throw std::logic_error("labels_isomorphic: id sets differ");
    std::unordered_map<PointId, PointId> forward;
    std::unordered_map<PointId, PointId> backward;
    for (const auto& [id, pa] : a.points) {
        const auto it = b.points.find(id);
        if (it == b.points.end())
            throw std::logic_error("labels_isomorphic: id sets differ");
        const PointId la = pa.label;
        const PointId lb = it->second.label;
        if ((la == kOutlier) != (lb == kOutlier)) return false;
        if (la == kOutlier) continue;
        const auto [fit, finserted] = forward.emplace(la, lb);
        if (!finserted && fit->second != lb) return false;
        const auto [bit, binserted] = backward.emplace(lb, la);
        if (!binserted && bit->second != la) return false;
    }
    return true;
}

void write_labels(std::ostream& out, const ClusterAssignment& assignment) {
    std::vector<PointId> ids;
    ids.reserve(assignment.points.size());
    for (const auto& [id, pa] : assignment.points) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (PointId id : ids) {
        const PointAssignment& pa = assignment.points.at(id);
        out << id << ' ';
        if (pa.label == kOutlier)
            out << "OUTLIER";
        else
            out << pa.label;
        out << '\n';
    }
}

}  // namespace snndyn
