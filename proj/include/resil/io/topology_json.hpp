#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "resil/error.hpp"
#include "resil/io/scenario_json.hpp"
#include "resil/service.hpp"
#include "resil/topology.hpp"

namespace resil::io {

/// `{"nodes": [{"id", "x"?, "y"?}], "edges": [{"a", "b", "capacity"?}]}`;
/// ids are integers, capacity defaults to 1.
inline Topology parse_topology(const json& doc) {
    try {
        detail::reject_unknown(doc, "", {"nodes", "edges"});
        std::vector<Node> nodes;
        for (const auto& n : doc.at("nodes")) {
            detail::reject_unknown(n, "nodes[]", {"id", "x", "y"});
            if (!n.at("id").is_number_integer())
                throw ConfigError("nodes[].id", "must be an integer");
            Node node{n.at("id").get<NodeId>(), std::nullopt, std::nullopt};
            if (n.contains("x"))
                node.x = detail::number(n, "nodes[]", "x");
            if (n.contains("y"))
                node.y = detail::number(n, "nodes[]", "y");
            nodes.push_back(node);
        }
        std::vector<Edge> edges;
        if (doc.contains("edges")) {
            for (const auto& e : doc.at("edges")) {
                detail::reject_unknown(e, "edges[]", {"a", "b", "capacity"});
                if (!e.at("a").is_number_integer() || !e.at("b").is_number_integer())
                    throw ConfigError("edges[]", "endpoints must be integer node ids");
                Edge edge{e.at("a").get<NodeId>(), e.at("b").get<NodeId>(), 1.0};
                if (e.contains("capacity"))
                    edge.capacity = detail::number(e, "edges[]", "capacity");
                edges.push_back(edge);
            }
        }
        return Topology(std::move(nodes), std::move(edges));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed topology: ") + e.what());
    }
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": malformed JSON: " + e.what());
    }
}

inline Topology load_topology(const std::string& path) { return parse_topology(load_json_file(path)); }

inline SlaTier parse_tier(const json& t) {
    detail::reject_unknown(t, "tiers[]",
                           {"name", "priority", "outage_target", "survival_time", "demand",
                            "degraded_demand"});
    SlaTier tier;
    tier.name = t.at("name").get<std::string>();
    tier.priority = t.at("priority").get<int>();
    tier.outage_target = t.value("outage_target", tier.outage_target);
    tier.survival_time = t.value("survival_time", tier.survival_time);
    tier.demand = t.value("demand", 0.0);
    tier.degraded_demand = t.value("degraded_demand", tier.demand);
    tier.validate();
    return tier;
}

/// `{"tiers": [SlaTier...], "flows": [{"id", "source", "destination",
/// "demand", "tier": name}]}`.
inline std::vector<FlowRequest> parse_flows(const json& doc) {
    try {
        detail::reject_unknown(doc, "", {"tiers", "flows"});
        std::map<std::string, SlaTier> tiers;
        std::vector<SlaTier> tier_list;
        for (const auto& t : doc.at("tiers")) {
            auto tier = parse_tier(t);
            tier_list.push_back(tier);
            if (!tiers.emplace(tier.name, tier).second)
                throw InvalidInput("duplicate tier name " + tier.name);
        }
        validate_tier_set(tier_list);
        std::vector<FlowRequest> flows;
        for (const auto& f : doc.at("flows")) {
            detail::reject_unknown(f, "flows[]", {"id", "source", "destination", "demand", "tier"});
            const auto name = f.at("tier").get<std::string>();
            const auto it = tiers.find(name);
            if (it == tiers.end())
                throw InvalidInput("flow references unknown tier " + name);
            FlowRequest flow{f.at("id").get<int>(), f.at("source").get<NodeId>(),
                             f.at("destination").get<NodeId>(), f.at("demand").get<double>(),
                             it->second};
            flow.validate();
            flows.push_back(flow);
        }
        return flows;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed flow file: ") + e.what());
    }
}

} // namespace resil::io
