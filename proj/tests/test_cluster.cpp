#include "cvchip/cluster.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace cvchip;

namespace {

ClusterGraph make(const std::string& name, int l_max = 9, int t_max = 3)
{
    auto p = preset(name);
    p.l_max = l_max;
    p.t_max = t_max;
    return build(p);
}

}  // namespace

TEST(Cluster, PresetCoefficients)
{
    for (const auto& n : preset_names()) {
        const auto g = make(n);
        EXPECT_NEAR(g.final_C(), preset_C(n), 1e-15) << n;
        EXPECT_NEAR(interior_edge_magnitude(g), preset_C(n), 1e-12) << n;
    }
    EXPECT_THROW(preset("torus"), std::invalid_argument);
}

TEST(Cluster, PairsPresetIsDisjointPairs)
{
    const auto g = make("pairs");
    // every mode has exactly one partner, edges = modes / 2
    for (int i = 0; i < g.modes(); ++i) EXPECT_EQ(mode_degree(g, i), 1);
    EXPECT_EQ(g.graph.edge_count() * 2, g.modes());
}

TEST(Cluster, NetworkIsOrthogonal)
{
    const auto g = make("full_3d");
    for (std::size_t m = 0; m < g.network.size(); ++m) {
        double n = 0;
        for (auto [s, v] : g.network[m]) n += v * v;
        EXPECT_NEAR(n, 1.0, 1e-12);
    }
}

TEST(Cluster, ComplexGraphNullifierOracle)
{
    // hand-built 3-mode graph: nullifier rows are I +- E
    SimplifiedGraph g({"x", "y", "z"}, 1.0);
    g.add_edge(0, 1, 0.5);
    g.add_edge(1, 2, -0.5);
    const auto ns = nullifiers(g);
    ASSERT_EQ(ns.size(), 3u);
    EXPECT_DOUBLE_EQ(ns[1].q.at(0), 0.5);
    EXPECT_DOUBLE_EQ(ns[1].q.at(2), -0.5);
    EXPECT_DOUBLE_EQ(ns[1].p.at(0), -0.5);
    EXPECT_DOUBLE_EQ(ns[1].q.at(1), 1.0);
}

TEST(Cluster, NullifierVariancesScale)
{
    const auto g = make("bilayer_square");
    const auto ns = nullifiers(g);
    const int n = g.modes();
    const auto s1 = graph_to_covariance(g.with_squeezing(1.0).graph.expand());
    const auto s2 = graph_to_covariance(g.with_squeezing(2.0).graph.expand());
    for (const auto& k : ns) {
        const double a = nullifier_variance(s1, q_vector(k, n)), b = nullifier_variance(s2, q_vector(k, n));
        EXPECT_NEAR(b / a, std::exp(-2.0), 1e-10);
    }
}

TEST(Cluster, SizeFormulas)
{
    const auto s0 = size(0, 1340, 1.0), s1 = size(1, 1302, 1.0), s2 = size(2, 1236, 7.0), s3 = size(3, 2025, 7.0);
    EXPECT_EQ(s0.spatial, 1);
    EXPECT_EQ(s0.spectral, 2680);
    EXPECT_EQ(s1.spatial, 2);
    EXPECT_EQ(s1.spectral, 2604);
    EXPECT_EQ(s2.spectral, 2472);
    EXPECT_DOUBLE_EQ(s2.tau, 7.0);
    EXPECT_EQ(s3.spatial, 4);
    EXPECT_EQ(s3.spectral, 45);
    EXPECT_EQ(s3.spectral2, 45);
    EXPECT_THROW(size(4, 10, 1), std::invalid_argument);
}

TEST(Cluster, CompleteMacronodesHaveDegreeEight)
{
    const auto g = make("full_3d", 21, 5);
    const auto v = macronode_coarse_grain(g);
    const auto d = v.degree();
    int eight = 0, complete = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (v.nodes[i].complete()) ++complete, eight += d[i] == 8;
    EXPECT_GT(complete, 0);
    EXPECT_GT(2 * eight, complete);
    for (int x : d) EXPECT_LE(x, 8);
}

TEST(Cluster, LabelsSortedAndUnique)
{
    const auto g = make("full_3d");
    std::set<ModeLabel> seen(g.labels.begin(), g.labels.end());
    EXPECT_EQ(seen.size(), g.labels.size());
    EXPECT_TRUE(std::is_sorted(g.labels.begin(), g.labels.end()));
    EXPECT_EQ(g.index(g.labels[5]), 5);
    EXPECT_THROW(g.index({'a', 1001, 0}), std::out_of_range);
}

TEST(Cluster, ProgramValidation)
{
    ChipProgram p;
    p.Delta = 2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = ChipProgram{};
    p.bmzi_E1 = 1.5;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}
