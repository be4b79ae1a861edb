#include "llna/graph.hpp"
#include "llna/measure.hpp"
#include "llna/power_law.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace llna;
using synth::complete_graph;
using synth::path_graph;

namespace {

Network from_tokens(std::initializer_list<const char*> xs) {
    return build_network(TokenSequence{{xs.begin(), xs.end()}, "d", LemmaMode::none});
}

bool has_edge(const Network& net, const std::string& a, const std::string& b) {
    NodeId ia = 0, ib = 0;
    for (NodeId i = 0; i < net.node_count(); ++i) {
        if (net.label(i) == a) ia = i;
        if (net.label(i) == b) ib = i;
    }
    return net.adjacent(ia, ib);
}

}  // namespace

TEST(BuildNetwork, Path) {
    const auto net = from_tokens({"cat", "sat", "mat"});
    EXPECT_EQ(net.node_count(), 3u);
    EXPECT_EQ(net.edge_count(), 2u);
    EXPECT_TRUE(has_edge(net, "cat", "sat"));
    EXPECT_TRUE(has_edge(net, "sat", "mat"));
    EXPECT_FALSE(has_edge(net, "cat", "mat"));
}

TEST(BuildNetwork, ClosingTriangle) {
    const auto net = from_tokens({"cat", "sat", "mat", "cat"});
    EXPECT_EQ(net.node_count(), 3u);
    EXPECT_EQ(net.edge_count(), 3u);
    EXPECT_TRUE(has_edge(net, "mat", "cat"));
}

TEST(BuildNetwork, RepeatedPairCollapses) {
    const auto net = from_tokens({"a", "b", "a", "b"});
    EXPECT_EQ(net.node_count(), 2u);
    EXPECT_EQ(net.edge_count(), 1u);
}

TEST(BuildNetwork, FirstAppearanceOrderAndNoSelfLoops) {
    const auto net = from_tokens({"x", "x", "y", "z", "y"});
    EXPECT_EQ(net.labels(), (std::vector<std::string>{"x", "y", "z"}));
    EXPECT_EQ(net.edge_count(), 2u);
    for (NodeId i = 0; i < net.node_count(); ++i) EXPECT_FALSE(net.adjacent(i, i));
}

TEST(BuildNetwork, TooFewTokens) {
    EXPECT_THROW(from_tokens({"alone"}), Error);
    EXPECT_THROW(from_tokens({}), Error);
}

TEST(BuildNetwork, HandshakeAndSymmetry) {
    Rng rng(7);
    for (int g = 0; g < 20; ++g) {
        const auto net = synth::gnp(30, 0.15, rng);
        const auto d = net.degrees();
        EXPECT_EQ(std::accumulate(d.begin(), d.end(), std::size_t{0}), 2 * net.edge_count());
        for (NodeId i = 0; i < net.node_count(); ++i)
            for (NodeId j : net.neighbors(i)) EXPECT_TRUE(net.adjacent(j, i));
    }
}

TEST(GiantComponent, ConnectedIsIdentity) {
    const auto net = path_graph(6);
    EXPECT_EQ(giant_component(net), net);
}

TEST(GiantComponent, LargestWins) {
    // component {0..4} (size 5) and {5,6,7} (size 3), interleaved labels
    Network net(synth::numbered_labels(8), {{5, 6}, {6, 7}, {0, 1}, {1, 2}, {2, 3}, {3, 4}});
    const auto g = giant_component(net);
    EXPECT_EQ(g.node_count(), 5u);
    EXPECT_EQ(g.label(0), "n0");
    EXPECT_EQ(g.edge_count(), 4u);
}

TEST(GiantComponent, TieGoesToLowestIndex) {
    Network net(synth::numbered_labels(8), {{4, 5}, {5, 6}, {6, 7}, {1, 0}, {1, 2}, {2, 3}});
    const auto g = giant_component(net);
    EXPECT_EQ(g.node_count(), 4u);
    EXPECT_EQ(g.label(0), "n0");
    Network swapped(synth::numbered_labels(8), {{0, 5}, {5, 6}, {6, 7}, {1, 2}, {2, 3}, {3, 4}});
    EXPECT_EQ(giant_component(swapped).label(0), "n0");
    EXPECT_TRUE(is_connected(giant_component(swapped)));
}

TEST(HierarchicalDegree, Path) {
    const auto net = path_graph(4);
    EXPECT_EQ(hierarchical_degree(net, 0, 1), 1u);
    EXPECT_EQ(hierarchical_degree(net, 0, 3), 1u);
    EXPECT_EQ(hierarchical_degree(net, 1, 2), 1u);
    EXPECT_EQ(hierarchical_degree(net, 1, 3), 0u);
}

TEST(HierarchicalDegree, LevelOneIsDegree) {
    Rng rng(3);
    const auto net = synth::connected_random(40, 0.08, rng);
    for (NodeId i = 0; i < net.node_count(); ++i) EXPECT_EQ(hierarchical_degree(net, i, 1), net.degree(i));
}

TEST(EdgeList, RoundTrip) {
    const auto net = from_tokens({"the", "cat's", "tab\xc3\xa9", "cat's", "mat"});
    std::stringstream ss;
    write_edge_list(ss, net);
    EXPECT_EQ(read_edge_list(ss), net);
}

TEST(EdgeList, RejectsMalformed) {
    std::stringstream ss("# nodes 2\n0\ta\n1\tb\n# edges 1\na\tq\n");
    EXPECT_THROW(read_edge_list(ss), Error);
}

// ---------------------------------------------------------------------------

TEST(Measure, PathOfFour) {
    const auto m = measure(path_graph(4));
    EXPECT_EQ(m.nodes, 4u);
    EXPECT_EQ(m.edges, 3u);
    EXPECT_DOUBLE_EQ(m.avg_degree, 1.5);
    EXPECT_DOUBLE_EQ(m.avg_clustering, 0.0);
    EXPECT_DOUBLE_EQ(m.avg_path_length, 20.0 / 12.0);
    EXPECT_EQ(m.diameter, 3);
    EXPECT_DOUBLE_EQ(m.density, 0.5);
    EXPECT_EQ(m.assortativity, -0.5);
    EXPECT_FALSE(m.assortativity_degenerate);
}

TEST(Measure, CompleteGraph) {
    const auto m = measure(complete_graph(4));
    EXPECT_DOUBLE_EQ(m.avg_clustering, 1.0);
    EXPECT_DOUBLE_EQ(m.avg_path_length, 1.0);
    EXPECT_EQ(m.diameter, 1);
    EXPECT_DOUBLE_EQ(m.density, 1.0);
    EXPECT_DOUBLE_EQ(m.avg_degree, 3.0);
    EXPECT_EQ(m.assortativity, 0.0);
    EXPECT_TRUE(m.assortativity_degenerate);
}

TEST(Measure, Preconditions) {
    EXPECT_THROW(measure(path_graph(2)), Error);
    Network split(synth::numbered_labels(4), {{0, 1}, {2, 3}});
    EXPECT_THROW(measure(split), Error);
}

TEST(Measure, MatchesBruteForce) {
    Rng rng(2024);
    for (int g = 0; g < 50; ++g) {
        const auto n = 3 + uniform_below(rng, 48);
        const auto net = synth::connected_random(n, uniform01(rng) * 0.3, rng);
        const auto m = measure(net, 1 + g % 3);
        const auto b = oracle::brute_force(net);
        EXPECT_NEAR(m.avg_degree, b.avg_degree, 1e-9);
        EXPECT_DOUBLE_EQ(m.avg_degree, 2.0 * static_cast<double>(net.edge_count()) / static_cast<double>(n));
        EXPECT_NEAR(m.avg_hier_degree_2, b.avg_h2, 1e-9);
        EXPECT_NEAR(m.avg_hier_degree_3, b.avg_h3, 1e-9);
        EXPECT_NEAR(m.avg_clustering, b.avg_clustering, 1e-9);
        EXPECT_NEAR(m.avg_path_length, b.avg_path, 1e-9);
        EXPECT_EQ(m.diameter, b.diameter);
        EXPECT_NEAR(m.density, b.density, 1e-9);
        EXPECT_NEAR(m.assortativity, b.assortativity, 1e-9);
        EXPECT_GE(m.assortativity, -1.0);
        EXPECT_LE(m.assortativity, 1.0);
        EXPECT_LE(m.avg_path_length, static_cast<double>(m.diameter));
    }
}

TEST(Measure, ThreadCountDoesNotChangeResults) {
    Rng rng(5);
    const auto net = synth::connected_random(120, 0.03, rng);
    const auto a = measure(net, 1), b = measure(net, 4);
    EXPECT_EQ(a.avg_path_length, b.avg_path_length);
    EXPECT_EQ(a.avg_hier_degree_2, b.avg_hier_degree_2);
    EXPECT_EQ(a.diameter, b.diameter);
}

// ---------------------------------------------------------------------------

TEST(PowerLaw, HurwitzZetaKnownValues) {
    EXPECT_NEAR(hurwitz_zeta(2.0, 1.0), M_PI * M_PI / 6.0, 1e-12);
    EXPECT_NEAR(hurwitz_zeta(4.0, 1.0), std::pow(M_PI, 4) / 90.0, 1e-12);
    EXPECT_NEAR(hurwitz_zeta(2.0, 3.0), M_PI * M_PI / 6.0 - 1.0 - 0.25, 1e-12);
}

TEST(PowerLaw, RecoversZetaExponent) {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto sample = synth::zeta_sample(2.5, 10000, seed);
        const auto fit = fit_power_law(sample);
        EXPECT_NEAR(fit.gamma, 2.5, 0.1) << "seed " << seed;
        EXPECT_TRUE(fit.reliable);
        EXPECT_GE(fit.xmin, 1u);
    }
}

TEST(PowerLaw, RecoversSteeperExponent) {
    const auto fit = fit_power_law(synth::zeta_sample(3.0, 20000, 9));
    EXPECT_NEAR(fit.gamma, 3.0, 0.12);
}

TEST(PowerLaw, TooFewObservations) {
    std::vector<std::size_t> few(49, 3);
    EXPECT_THROW(fit_power_law(few), Error);
}

TEST(PowerLaw, AllEqualIsDegenerate) {
    std::vector<std::size_t> same(200, 4);
    const auto fit = fit_power_law(same);
    EXPECT_FALSE(fit.reliable);
    EXPECT_TRUE(std::isnan(fit.gamma));
}

TEST(PowerLaw, GoldenSectionFindsMaximum) {
    const double x = detail::golden_maximize([](double v) { return -(v - 2.7) * (v - 2.7); }, 1.0, 8.0, 1e-10);
    EXPECT_NEAR(x, 2.7, 1e-8);
}
