#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "resil/topology.hpp"

using namespace resil;

namespace {

Topology make(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < n; ++i)
        nodes.push_back({static_cast<NodeId>(i), std::nullopt, std::nullopt});
    std::vector<Edge> es;
    for (auto [a, b] : edges)
        es.push_back({a, b, 1.0});
    return Topology(nodes, es);
}

Topology complete(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return make(n, e);
}

Topology path3() { return make(3, {{0, 1}, {1, 2}}); }

Topology cycle(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::size_t i = 0; i < n; ++i)
        e.emplace_back(i, (i + 1) % n);
    return make(n, e);
}

Topology bowtie() { return make(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}}); }

// 3x3 grid, node id = 3*row + col, coordinates (col, row).
Topology grid3() {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            nodes.push_back({3 * r + c, double(c), double(r)});
            if (c < 2)
                edges.push_back({3 * r + c, 3 * r + c + 1, 1.0});
            if (r < 2)
                edges.push_back({3 * r + c, 3 * (r + 1) + c, 1.0});
        }
    return Topology(nodes, edges);
}

} // namespace

TEST(Topology, Validation) {
    EXPECT_THROW(make(2, {{0, 0}}), InvalidInput);
    EXPECT_THROW(make(2, {{0, 1}, {1, 0}}), InvalidInput);
    EXPECT_THROW(make(2, {{0, 5}}), InvalidInput);
    EXPECT_THROW(Topology({{0, {}, {}}, {0, {}, {}}}, {}), InvalidInput);
    EXPECT_THROW(Topology({{0, {}, {}}, {1, {}, {}}}, {{0, 1, 0.0}}), InvalidInput);
    EXPECT_THROW(Topology({{0, 1.0, std::nullopt}}, {}), InvalidInput);
}

TEST(VertexConnectivity, Examples) {
    EXPECT_EQ(vertex_connectivity(complete(4)), 3);
    EXPECT_EQ(vertex_connectivity(path3()), 1);
    EXPECT_EQ(vertex_connectivity(cycle(5)), 2);
    EXPECT_EQ(vertex_connectivity(make(2, {{0, 1}})), 1);
    EXPECT_EQ(vertex_connectivity(make(3, {{0, 1}})), 0);
    EXPECT_EQ(vertex_connectivity(grid3()), 2);
    EXPECT_THROW(vertex_connectivity(make(1, {})), InvalidInput);
}

TEST(VertexConnectivity, MatchesBruteForceOnRandomGraphs) {
    std::mt19937 gen(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const auto g = oracle::random_graph(n, 0.25 + 0.65 * (trial % 10) / 10.0, gen);
        EXPECT_EQ(vertex_connectivity(g.topology()), oracle::brute_vertex_connectivity(g))
            << "trial " << trial;
    }
}

TEST(CriticalNodes, Examples) {
    EXPECT_EQ(critical_nodes(path3()), std::vector<NodeId>{1});
    EXPECT_TRUE(critical_nodes(cycle(6)).empty());
    EXPECT_EQ(critical_nodes(bowtie()), std::vector<NodeId>{2});
    EXPECT_THROW(critical_nodes(make(3, {{0, 1}})), PreconditionError);
}

TEST(CriticalNodes, MatchesBruteForceAndIsolation) {
    std::mt19937 gen(4242);
    int checked = 0;
    for (int trial = 0; checked < 100; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const auto g = oracle::random_graph(n, 0.3 + 0.5 * (trial % 7) / 7.0, gen);
        const auto topo = g.topology();
        if (!is_connected(topo))
            continue;
        ++checked;
        const auto got = critical_nodes(topo);
        const std::set<NodeId> got_set(got.begin(), got.end());
        EXPECT_EQ(got_set, oracle::brute_articulation(g)) << "trial " << trial;
        for (NodeId v = 0; v < static_cast<NodeId>(n); ++v) {
            const std::vector<NodeId> one{v};
            const auto r = isolate(topo, one);
            EXPECT_EQ(got_set.contains(v), !r.empty && !r.connected);
        }
    }
}

TEST(Isolate, Examples) {
    const std::vector<NodeId> zero{0}, one{1}, two{2};
    auto r = isolate(complete(4), zero);
    EXPECT_TRUE(r.connected);
    EXPECT_EQ(r.component_sizes, std::vector<std::size_t>{3});
    EXPECT_EQ(r.residual.size(), 3u);
    EXPECT_EQ(r.residual.edges().size(), 3u);

    r = isolate(path3(), one);
    EXPECT_FALSE(r.connected);
    EXPECT_EQ(r.component_sizes, (std::vector<std::size_t>{1, 1}));

    r = isolate(bowtie(), two);
    EXPECT_EQ(r.component_sizes, (std::vector<std::size_t>{2, 2}));

    const std::vector<NodeId> all{0, 1, 2};
    r = isolate(path3(), all);
    EXPECT_TRUE(r.empty);
    EXPECT_FALSE(r.connected);
    EXPECT_TRUE(r.component_sizes.empty());

    const std::vector<NodeId> unknown{9};
    EXPECT_THROW(isolate(path3(), unknown), InvalidInput);
}

TEST(Reroute, GridAroundCenter) {
    const auto g = grid3();
    const auto path = reroute_avoiding(g, 0, 8, DisruptionRegion::circle(1.0, 1.0, 0.5));
    EXPECT_EQ(path.size(), 5u);
    EXPECT_EQ(std::count(path.begin(), path.end(), 4), 0);
    // Lexicographically least boundary path.
    EXPECT_EQ(path, (std::vector<NodeId>{0, 1, 2, 5, 8}));
}

TEST(Reroute, EmptyRegionIsPlainShortestPath) {
    const auto g = grid3();
    const auto path = reroute_avoiding(g, 0, 8, DisruptionRegion::none());
    EXPECT_EQ(path, (std::vector<NodeId>{0, 1, 2, 5, 8}));
    EXPECT_EQ(reroute_avoiding(g, 3, 5, DisruptionRegion::none()),
              (std::vector<NodeId>{3, 4, 5}));
}

TEST(Reroute, BoundaryNodesSurvive) {
    const auto g = grid3();
    // Only node 1 is strictly inside; node 4 at (1,1) lies exactly on the circle.
    const auto path = reroute_avoiding(g, 3, 5, DisruptionRegion::circle(1.0, 0.0, 1.0));
    EXPECT_EQ(path, (std::vector<NodeId>{3, 4, 5}));
}

TEST(Reroute, Errors) {
    const auto g = grid3();
    EXPECT_THROW(reroute_avoiding(g, 4, 8, DisruptionRegion::circle(1, 1, 0.5)), InvalidInput);
    EXPECT_THROW(reroute_avoiding(g, 0, 99, DisruptionRegion::none()), InvalidInput);
    // Hub 2 is the only link between the two sides.
    const auto hub = make(5, {{0, 2}, {1, 2}, {2, 3}, {2, 4}, {0, 1}, {3, 4}});
    EXPECT_THROW(reroute_avoiding(hub, 0, 4, DisruptionRegion::nodes({2})), NoRoute);
    EXPECT_THROW(DisruptionRegion::circle(0, 0, 0), InvalidInput);
}

TEST(Reroute, OptimalAgainstExhaustiveEnumeration) {
    std::mt19937 gen(777);
    int routed = 0, unroutable = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 4 + trial % 7;
        const auto g = oracle::random_graph(n, 0.35, gen);
        const auto topo = g.topology();
        const std::size_t s = gen() % n;
        std::size_t t = gen() % n;
        if (t == s)
            t = (s + 1) % n;
        std::set<NodeId> region;
        std::vector<bool> blocked(n, false);
        for (std::size_t v = 0; v < n; ++v)
            if (v != s && v != t && gen() % 4 == 0) {
                region.insert(static_cast<NodeId>(v));
                blocked[v] = true;
            }
        std::vector<std::vector<NodeId>> paths;
        oracle::all_simple_paths(g, s, t, blocked, paths);
        const auto region_obj = DisruptionRegion::nodes(region);
        if (paths.empty()) {
            EXPECT_THROW(reroute_avoiding(topo, s, t, region_obj), NoRoute);
            ++unroutable;
            continue;
        }
        const auto best = *std::min_element(paths.begin(), paths.end(), [](auto& a, auto& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        const auto got = reroute_avoiding(topo, s, t, region_obj);
        EXPECT_EQ(got, best) << "trial " << trial;
        for (NodeId v : got)
            EXPECT_FALSE(region.contains(v));
        ++routed;
    }
    EXPECT_GT(routed, 100);
    EXPECT_GT(unroutable, 5);
}

namespace {

std::vector<FlowRequest> three_flows() {
    const SlaTier critical{"critical", 0, 1e-4, 2, 4, 4};
    const SlaTier standard{"standard", 1, 1e-3, 4, 4, 2};
    const SlaTier best{"best-effort", 2, 1e-2, 8, 4, 0};
    return {{1, 0, 1, 4, critical}, {2, 0, 2, 4, standard}, {3, 1, 2, 4, best}};
}

} // namespace

TEST(ShedTraffic, Examples) {
    const auto flows = three_flows();
    EXPECT_EQ(shed_traffic(flows, 10), (std::vector<double>{4, 4, 2}));
    EXPECT_EQ(shed_traffic(flows, 0), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(shed_traffic(flows, 50), (std::vector<double>{4, 4, 4}));
    EXPECT_THROW(shed_traffic(flows, -1), InvalidInput);
}

TEST(ShedTraffic, TiesBrokenByFlowId) {
    auto flows = three_flows();
    flows[2].tier = flows[1].tier;
    flows[2].id = 0;  // same tier as flow 2, smaller id
    EXPECT_EQ(shed_traffic(flows, 10), (std::vector<double>{4, 2, 4}));
}

TEST(ShedTraffic, MonotoneInCapacityAndBounded) {
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<FlowRequest> flows;
        for (int i = 0; i < 1 + trial % 8; ++i) {
            SlaTier tier{"t", static_cast<int>(gen() % 3), 0.01, 1, 1, 1};
            flows.push_back({i, 0, 1, u(gen), tier});
        }
        std::vector<double> prev(flows.size(), 0.0);
        for (double cap = 0.0; cap < 40.0; cap += 0.7) {
            const auto got = shed_traffic(flows, cap);
            double total = 0.0;
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_GE(got[i], prev[i]);
                EXPECT_LE(got[i], flows[i].demand);
                total += got[i];
            }
            EXPECT_LE(total, cap + 1e-12);
            prev = got;
        }
    }
}

TEST(FlowRequest, Validation) {
    FlowRequest f{1, 3, 3, 1.0, {}};
    EXPECT_THROW(f.validate(), InvalidInput);
    f.destination = 4;
    f.demand = 0.0;
    EXPECT_THROW(f.validate(), InvalidInput);
}
