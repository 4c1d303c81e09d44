#include "cvchip/gaussian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cvchip;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

bool is_symplectic(const Mat& s, double tol = 1e-12)
{
    const Mat om = symplectic_form(s.rows() / 2);
    return max_abs(s * om * s.transpose() - om) < tol;
}

}  // namespace

TEST(Gaussian, VacuumIsPhysical)
{
    auto v = GaussianState::vacuum(3);
    EXPECT_NEAR(v.uncertainty_margin(), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(v.cov(4, 4), 0.5);
}

TEST(Gaussian, TmssCovarianceMatchesClosedForm)
{
    const double r = 0.7;
    const auto s = graph_to_covariance(tmss_graph(r).expand());
    const double ch = std::cosh(2 * r) / 2, sh = std::sinh(2 * r) / 2;
    // q1 q2 correlated, p1 p2 anticorrelated
    Mat want = Mat::Zero(4, 4);
    want << ch, sh, 0, 0,
            sh, ch, 0, 0,
            0, 0, ch, -sh,
            0, 0, -sh, ch;
    EXPECT_LT(max_abs(s.cov - want), 1e-12);
    Vec q = Vec::Zero(4);
    q << 1, -1, 0, 0;
    EXPECT_NEAR(nullifier_variance(s, q / std::sqrt(2.0)), std::exp(-2 * r) / 2, 1e-12);
}

TEST(Gaussian, BeamsplitterGateMatchesGraphRule)
{
    // rotate the TMSS with B_01 at the graph level and at the covariance level
    const double r = 0.4;
    auto g = tmss_graph(r);
    const auto direct = bsg_matrix(0, 1, 2).apply(graph_to_covariance(g.expand()));
    const auto viagraph = graph_to_covariance(apply_beamsplitter_graph(g, 0, 1).expand());
    EXPECT_LT(max_abs(direct.cov - viagraph.cov), 1e-12);
}

TEST(Gaussian, GatesAreSymplectic)
{
    EXPECT_TRUE(is_symplectic(bsg_matrix(0, 2, 3).S));
    EXPECT_TRUE(is_symplectic(foursplitter_matrix(0, 1, 2, 3, 4).S));
    EXPECT_TRUE(is_symplectic(rotation(0.3).S));
    EXPECT_TRUE(is_symplectic(squeezer(0.8).S));
    EXPECT_TRUE(is_symplectic(v_gate(0.2, 1.3).S));
    EXPECT_TRUE(is_symplectic(cz_gate(1.7).S));
}

TEST(Gaussian, ExplicitGateMatrices)
{
    const double t = 0.37;
    Mat2 r;
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    EXPECT_LT(max_abs(rotation(t).S - r), 1e-15);

    Mat cz = Mat::Identity(4, 4);
    cz(2, 1) = cz(3, 0) = 2.5;  // p1 += g q2, p2 += g q1
    EXPECT_LT(max_abs(cz_gate(2.5).S - cz), 1e-15);

    // 50:50 with x' = (x - y)/sqrt2, y' = (x + y)/sqrt2 on q and p alike
    const double h = 1 / std::sqrt(2.0);
    Mat b = Mat::Zero(4, 4);
    b << h, -h, 0, 0,
         h, h, 0, 0,
         0, 0, h, -h,
         0, 0, h, h;
    EXPECT_LT(max_abs(bsg_matrix(0, 1, 2).S - b), 1e-15);
}

TEST(Gaussian, ProductOrderIsOperatorOrder)
{
    const auto a = rotation(0.2), b = squeezer(0.5);
    EXPECT_LT(max_abs((a * b).S - a.S * b.S), 1e-15);
}

TEST(Gaussian, HomodyneConditioningIsSchurComplement)
{
    const double r = 0.9;
    const auto s = graph_to_covariance(tmss_graph(r).expand());
    // measure q of mode 0: remaining mode gets cov_B - c_BA c_AA^-1 c_AB
    const auto out = homodyne_condition(s, 0, std::numbers::pi / 2, 0.8);
    const double ch = std::cosh(2 * r) / 2, sh = std::sinh(2 * r) / 2;
    EXPECT_NEAR(out.cov(0, 0), ch - sh * sh / ch, 1e-12);
    EXPECT_NEAR(out.cov(1, 1), ch, 1e-12);
    EXPECT_NEAR(out.mean(0), sh / ch * 0.8, 1e-12);
    EXPECT_GE(out.uncertainty_margin(), -1e-12);
}

TEST(Gaussian, HomodyneRowConvention)
{
    // p(theta) = cos(theta) p + sin(theta) q
    const Vec c = homodyne_row(2, 1, 0.3);
    EXPECT_DOUBLE_EQ(c(1), std::sin(0.3));
    EXPECT_DOUBLE_EQ(c(3), std::cos(0.3));
    EXPECT_DOUBLE_EQ(c(0) + c(2), 0.0);
}

TEST(Gaussian, ClusterFormNullifiersAtInfiniteLimit)
{
    // rotated TMSS: V -> E as r grows
    auto g = to_cluster_state(tmss_graph(3.0));
    const auto z = g.expand();
    EXPECT_NEAR(z.V(0, 1), -std::tanh(6.0), 1e-12);
    EXPECT_NEAR(z.U(0, 0), 1 / std::cosh(6.0), 1e-12);
}

TEST(Gaussian, DisplacementMovesMean)
{
    const cplx a(0.3, -1.1);
    const auto s = displacement(a).apply(GaussianState::vacuum(1));
    EXPECT_NEAR(s.mean(0), std::sqrt(2.0) * a.real(), 1e-15);
    EXPECT_NEAR(s.mean(1), std::sqrt(2.0) * a.imag(), 1e-15);
}

TEST(Gaussian, BadGraphRejected)
{
    ComplexGraph z{Mat::Zero(2, 2), -Mat::Identity(2, 2), {"x", "y"}};
    EXPECT_ANY_THROW(graph_to_covariance(z));
    EXPECT_THROW(homodyne_condition(GaussianState::vacuum(1), 3, 0, 0), std::out_of_range);
}
