#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "resil/topology.hpp"

namespace resil::io {

inline nlohmann::ordered_json connectivity_report(const Topology& g) {
    nlohmann::ordered_json j;
    j["analysis"] = "connectivity";
    j["nodes"] = g.size();
    j["edges"] = g.edges().size();
    j["connected"] = is_connected(g);
    j["vertex_connectivity"] = vertex_connectivity(g);
    return j;
}

inline nlohmann::ordered_json critical_report(const Topology& g) {
    nlohmann::ordered_json j;
    j["analysis"] = "critical";
    j["critical_nodes"] = critical_nodes(g);
    return j;
}

inline nlohmann::ordered_json isolate_report(const Topology& g, std::span<const NodeId> remove) {
    const auto r = isolate(g, remove);
    nlohmann::ordered_json j;
    j["analysis"] = "isolate";
    j["removed"] = std::vector<NodeId>(remove.begin(), remove.end());
    j["remaining_nodes"] = r.residual.size();
    j["empty"] = r.empty;
    j["connected"] = r.connected;
    j["component_sizes"] = r.component_sizes;
    return j;
}

/// Reroute result; a missing route is reported, not thrown.
inline nlohmann::ordered_json reroute_report(const Topology& g, NodeId source, NodeId destination,
                                             const DisruptionRegion& region) {
    nlohmann::ordered_json j;
    j["analysis"] = "reroute";
    j["source"] = source;
    j["destination"] = destination;
    try {
        const auto path = reroute_avoiding(g, source, destination, region);
        j["routed"] = true;
        j["hops"] = path.size() - 1;
        j["path"] = path;
    } catch (const NoRoute& e) {
        j["routed"] = false;
        j["hops"] = nullptr;
        j["path"] = nullptr;
        j["reason"] = e.what();
    }
    return j;
}

inline nlohmann::ordered_json shed_report(std::span<const FlowRequest> flows, double capacity) {
    const auto admitted = shed_traffic(flows, capacity);
    nlohmann::ordered_json j;
    j["analysis"] = "shed";
    j["capacity"] = capacity;
    auto rows = nlohmann::ordered_json::array();
    double total = 0.0;
    for (std::size_t i = 0; i < flows.size(); ++i) {
        total += admitted[i];
        rows.push_back({{"id", flows[i].id},
                        {"tier", flows[i].tier.name},
                        {"priority", flows[i].tier.priority},
                        {"demand", flows[i].demand},
                        {"admitted", admitted[i]}});
    }
    j["flows"] = std::move(rows);
    j["total_admitted"] = total;
    return j;
}

} // namespace resil::io
