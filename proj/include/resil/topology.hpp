#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "resil/error.hpp"
#include "resil/service.hpp"

namespace resil {

using NodeId = std::int64_t;

struct Node {
    NodeId id = 0;
    std::optional<double> x;
    std::optional<double> y;

    bool has_position() const { return x.has_value() && y.has_value(); }
};

struct Edge {
    NodeId a = 0;
    NodeId b = 0;
    double capacity = 1.0;
};

/// Undirected simple graph. Nodes are kept sorted by id and every adjacency
/// list is sorted by neighbour id, so all traversals are deterministic.
class Topology {
public:
    Topology() = default;

    Topology(std::vector<Node> nodes, std::vector<Edge> edges)
        : nodes_(std::move(nodes)), edges_(std::move(edges)) {
        std::sort(nodes_.begin(), nodes_.end(),
                  [](const Node& l, const Node& r) { return l.id < r.id; });
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (i > 0 && nodes_[i].id == nodes_[i - 1].id)
                throw InvalidInput("duplicate node id " + std::to_string(nodes_[i].id));
            if (nodes_[i].x.has_value() != nodes_[i].y.has_value())
                throw InvalidInput("node " + std::to_string(nodes_[i].id) +
                                   " needs both coordinates or neither");
            index_.emplace(nodes_[i].id, i);
        }
        adjacency_.assign(nodes_.size(), {});
        std::set<std::pair<NodeId, NodeId>> seen;
        for (const auto& e : edges_) {
            if (e.a == e.b)
                throw InvalidInput("self-loop on node " + std::to_string(e.a));
            if (!(e.capacity > 0.0))
                throw InvalidInput("edge capacity must be > 0");
            const auto ia = index_of(e.a);
            const auto ib = index_of(e.b);
            if (!ia || !ib)
                throw InvalidInput("edge references an unknown node");
            if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second)
                throw InvalidInput("duplicate edge " + std::to_string(e.a) + "-" +
                                   std::to_string(e.b));
            adjacency_[*ia].push_back(*ib);
            adjacency_[*ib].push_back(*ia);
        }
        for (auto& adj : adjacency_)
            std::sort(adj.begin(), adj.end());
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const Node> nodes() const noexcept { return nodes_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Node& node(std::size_t index) const { return nodes_.at(index); }
    NodeId id(std::size_t index) const { return nodes_.at(index).id; }

    std::optional<std::size_t> index_of(NodeId id) const {
        const auto it = index_.find(id);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    /// Neighbour indices, ascending (index order equals id order).
    std::span<const std::size_t> neighbors(std::size_t index) const {
        return adjacency_.at(index);
    }

    bool adjacent(std::size_t u, std::size_t v) const {
        const auto& adj = adjacency_.at(u);
        return std::binary_search(adj.begin(), adj.end(), v);
    }

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::map<NodeId, std::size_t> index_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

/// Connected components as sorted index lists, ordered by smallest member.
/// Nodes flagged in `removed` are skipped.
inline std::vector<std::vector<std::size_t>> connected_components(
    const Topology& g, const std::vector<bool>& removed = {}) {
    const std::size_t n = g.size();
    auto gone = [&](std::size_t v) { return !removed.empty() && removed[v]; };
    std::vector<bool> seen(n, false);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start] || gone(start))
            continue;
        std::vector<std::size_t> comp;
        std::vector<std::size_t> stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            comp.push_back(u);
            for (std::size_t v : g.neighbors(u)) {
                if (!seen[v] && !gone(v)) {
                    seen[v] = true;
                    stack.push_back(v);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected(const Topology& g) {
    return g.size() > 0 && connected_components(g).size() == 1;
}

namespace detail {

// Unit-capacity vertex-disjoint path count between s and t (s, t not
// adjacent) by augmenting paths on the split graph: v_in = 2v, v_out = 2v+1,
// v_in -> v_out capacity 1 for interior vertices. Stops once `limit` is hit.
inline int vertex_disjoint_paths(const Topology& g, std::size_t s, std::size_t t, int limit) {
    const std::size_t n = g.size();
    constexpr int kInf = std::numeric_limits<int>::max() / 4;
    struct Arc {
        std::size_t to;
        int cap;
        std::size_t rev;
    };
    std::vector<std::vector<Arc>> arcs(2 * n);
    auto add = [&](std::size_t u, std::size_t v, int cap) {
        arcs[u].push_back({v, cap, arcs[v].size()});
        arcs[v].push_back({u, 0, arcs[u].size() - 1});
    };
    for (std::size_t v = 0; v < n; ++v)
        add(2 * v, 2 * v + 1, (v == s || v == t) ? kInf : 1);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v : g.neighbors(u))
            add(2 * u + 1, 2 * v, kInf);

    const std::size_t source = 2 * s + 1;
    const std::size_t sink = 2 * t;
    int flow = 0;
    std::vector<std::pair<std::size_t, std::size_t>> parent(2 * n);
    while (flow < limit) {
        std::vector<bool> visited(2 * n, false);
        std::queue<std::size_t> q;
        q.push(source);
        visited[source] = true;
        while (!q.empty() && !visited[sink]) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t k = 0; k < arcs[u].size(); ++k) {
                const auto& a = arcs[u][k];
                if (a.cap > 0 && !visited[a.to]) {
                    visited[a.to] = true;
                    parent[a.to] = {u, k};
                    q.push(a.to);
                }
            }
        }
        if (!visited[sink])
            break;
        for (std::size_t v = sink; v != source;) {
            auto [u, k] = parent[v];
            arcs[u][k].cap -= 1;
            arcs[v][arcs[u][k].rev].cap += 1;
            v = u;
        }
        ++flow;
    }
    return flow;
}

} // namespace detail

/// Minimum number of node removals that disconnects the network, minimised
/// over every non-adjacent pair (Menger). A complete graph on n nodes gives
/// n - 1; a disconnected graph gives 0.
inline int vertex_connectivity(const Topology& g) {
    const std::size_t n = g.size();
    if (n < 2)
        throw InvalidInput("vertex connectivity needs at least two nodes");
    int best = static_cast<int>(n) - 1;
    for (std::size_t s = 0; s < n && best > 0; ++s)
        for (std::size_t t = s + 1; t < n && best > 0; ++t)
            if (!g.adjacent(s, t))
                best = std::min(best, detail::vertex_disjoint_paths(g, s, t, best));
    return best;
}

/// Articulation points by depth-first low-link, as sorted node ids.
inline std::vector<NodeId> critical_nodes(const Topology& g) {
    if (g.size() == 0)
        throw InvalidInput("topology has no nodes");
    if (!is_connected(g))
        throw PreconditionError("critical node analysis needs a connected topology");

    const std::size_t n = g.size();
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> order(n, kUnset), low(n, 0), parent(n, kUnset);
    std::vector<bool> cut(n, false);
    std::size_t clock = 0;

    // Iterative DFS: frame = (vertex, next neighbour position).
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    order[0] = low[0] = clock++;
    std::size_t root_children = 0;
    while (!stack.empty()) {
        auto& [u, pos] = stack.back();
        const auto adj = g.neighbors(u);
        if (pos < adj.size()) {
            const std::size_t v = adj[pos++];
            if (order[v] == kUnset) {
                parent[v] = u;
                order[v] = low[v] = clock++;
                if (u == 0)
                    ++root_children;
                stack.emplace_back(v, 0);
            } else if (v != parent[u]) {
                low[u] = std::min(low[u], order[v]);
            }
            continue;
        }
        const std::size_t done = u;
        stack.pop_back();
        if (stack.empty())
            break;
        const std::size_t p = stack.back().first;
        low[p] = std::min(low[p], low[done]);
        if (p != 0 && low[done] >= order[p])
            cut[p] = true;
    }
    if (root_children > 1)
        cut[0] = true;

    std::vector<NodeId> out;
    for (std::size_t v = 0; v < n; ++v)
        if (cut[v])
            out.push_back(g.id(v));
    return out;
}

struct IsolationReport {
    Topology residual;
    bool empty = false;
    bool connected = false;
    /// Component sizes, largest first.
    std::vector<std::size_t> component_sizes;
};

/// Removes the given nodes and their incident edges.
inline IsolationReport isolate(const Topology& g, std::span<const NodeId> remove) {
    std::set<NodeId> drop;
    for (NodeId id : remove) {
        if (!g.index_of(id))
            throw InvalidInput("cannot isolate unknown node " + std::to_string(id));
        drop.insert(id);
    }
    std::vector<Node> nodes;
    for (const auto& node : g.nodes())
        if (!drop.contains(node.id))
            nodes.push_back(node);
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (!drop.contains(e.a) && !drop.contains(e.b))
            edges.push_back(e);

    IsolationReport report{Topology(std::move(nodes), std::move(edges)), false, false, {}};
    report.empty = report.residual.size() == 0;
    for (const auto& comp : connected_components(report.residual))
        report.component_sizes.push_back(comp.size());
    std::sort(report.component_sizes.rbegin(), report.component_sizes.rend());
    report.connected = report.component_sizes.size() == 1;
    return report;
}

/// Area hit by a disruption: an open disc in the plane or an explicit node set.
class DisruptionRegion {
public:
    struct Circle {
        double x = 0.0;
        double y = 0.0;
        double radius = 1.0;
    };

    static DisruptionRegion circle(double x, double y, double radius) {
        if (!(radius > 0.0))
            throw InvalidInput("region radius must be > 0");
        return DisruptionRegion(Circle{x, y, radius});
    }

    static DisruptionRegion nodes(std::set<NodeId> ids) { return DisruptionRegion(std::move(ids)); }

    static DisruptionRegion none() { return DisruptionRegion(std::set<NodeId>{}); }

    /// Circle membership is strict: nodes on the boundary, and nodes without
    /// coordinates, are outside.
    bool contains(const Node& node) const {
        if (const auto* c = std::get_if<Circle>(&shape_)) {
            if (!node.has_position())
                return false;
            const double dx = *node.x - c->x;
            const double dy = *node.y - c->y;
            return dx * dx + dy * dy < c->radius * c->radius;
        }
        return std::get<std::set<NodeId>>(shape_).contains(node.id);
    }

private:
    explicit DisruptionRegion(std::variant<Circle, std::set<NodeId>> shape)
        : shape_(std::move(shape)) {}

    std::variant<Circle, std::set<NodeId>> shape_;
};

/// Shortest hop-count path from source to destination that avoids every node
/// inside the region. Among equally short paths the lexicographically
/// smallest id sequence wins.
inline std::vector<NodeId> reroute_avoiding(const Topology& g, NodeId source,
                                            NodeId destination,
                                            const DisruptionRegion& region) {
    const auto s = g.index_of(source);
    const auto t = g.index_of(destination);
    if (!s || !t)
        throw InvalidInput("route endpoint is not in the topology");
    if (region.contains(g.node(*s)) || region.contains(g.node(*t)))
        throw InvalidInput("route endpoint lies inside the disruption region");

    const std::size_t n = g.size();
    std::vector<bool> blocked(n);
    for (std::size_t v = 0; v < n; ++v)
        blocked[v] = region.contains(g.node(v));

    // Distances to the destination; a greedy walk along the smallest
    // neighbour that descends the distance field is lexicographically least.
    constexpr std::size_t kFar = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n, kFar);
    std::queue<std::size_t> q;
    dist[*t] = 0;
    q.push(*t);
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        for (std::size_t v : g.neighbors(u)) {
            if (!blocked[v] && dist[v] == kFar) {
                dist[v] = dist[u] + 1;
                q.push(v);
            }
        }
    }
    if (dist[*s] == kFar)
        throw NoRoute("no path from " + std::to_string(source) + " to " +
                      std::to_string(destination) + " avoids the region");

    std::vector<NodeId> path{source};
    for (std::size_t u = *s; u != *t;) {
        for (std::size_t v : g.neighbors(u)) {
            if (!blocked[v] && dist[v] + 1 == dist[u]) {
                u = v;
                break;
            }
        }
        path.push_back(g.id(u));
    }
    return path;
}

struct FlowRequest {
    int id = 0;
    NodeId source = 0;
    NodeId destination = 0;
    double demand = 0.0;
    SlaTier tier;

    void validate() const {
        if (source == destination)
            throw InvalidInput("flow " + std::to_string(id) + ": source equals destination");
        if (!(demand > 0.0))
            throw InvalidInput("flow " + std::to_string(id) + ": demand must be > 0");
    }
};

/// Admits flows by ascending tier priority (ties by flow id) until capacity
/// runs out; the marginal flow is admitted partially. Admitted demand is
/// returned in input order.
inline std::vector<double> shed_traffic(std::span<const FlowRequest> flows,
                                        double available_capacity) {
    if (!(available_capacity >= 0.0))
        throw InvalidInput("available capacity must be >= 0");
    for (const auto& f : flows)
        f.validate();
    std::vector<std::size_t> order(flows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(flows[a].tier.priority, flows[a].id) <
               std::pair(flows[b].tier.priority, flows[b].id);
    });
    std::vector<double> admitted(flows.size(), 0.0);
    double remaining = available_capacity;
    for (std::size_t idx : order) {
        if (remaining <= 0.0)
            break;
        admitted[idx] = std::min(flows[idx].demand, remaining);
        remaining -= admitted[idx];
    }
    return admitted;
}

} // namespace resil
