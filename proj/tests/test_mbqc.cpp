#include "cvchip/mbqc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cvchip;
using std::numbers::pi;

namespace {

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

GaussianState coherent(double q, double p)
{
    auto s = GaussianState::vacuum(1);
    s.mean << q, p;
    return s;
}

Lattice small_lattice()
{
    ChipProgram prog;
    prog.l_max = 23;
    prog.t_max = 3;
    return Lattice(build(prog));
}

}  // namespace

TEST(Mbqc, TeleportFormulaMatchesFiniteSqueezingCircuit)
{
    const double t1 = 0.4, t2 = 1.9, m1 = 0.7, m2 = -0.3;
    const auto in = squeezer(0.3).apply(coherent(0.8, -0.5));
    const auto sim = teleport_simulated(t1, t2, m1, m2, 9.0, in);
    const auto want = teleport(t1, t2, m1, m2).apply(in);
    EXPECT_LT((sim.mean - want.mean).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LT(max_abs(sim.cov - want.cov), 1e-6);
}

TEST(Mbqc, TeleportAtZeroSqueezingIsNoisy)
{
    const auto sim = teleport_simulated(0.4, 1.9, 0, 0, 0.0, coherent(3.0, 0.0));
    const auto want = teleport(0.4, 1.9).apply(coherent(3.0, 0.0));
    EXPECT_GT(max_abs(sim.cov - want.cov), 0.1);
}

TEST(Mbqc, VGateClosedForm)
{
    // V(t1, t2) = R((t1+t2)/2) S(tan((t1-t2)/2)) R((t1+t2)/2), S(s) = diag(s... ) in (q,p)
    const double a = 0.9, b = 0.2;
    const double c = std::cos((a + b) / 2), s = std::sin((a + b) / 2), t = std::tan((a - b) / 2);
    Mat2 r, sq;
    r << c, -s, s, c;
    sq = squeezer(t).S;
    EXPECT_LT(max_abs(V2(a, b) - r * sq * r), 1e-15);
    EXPECT_NEAR(V2(a, b).determinant(), 1.0, 1e-14);
    EXPECT_THROW(V2(0.3, 0.3), std::domain_error);
}

TEST(Mbqc, SingleModeStepActsOnBothHolders)
{
    for (int region : {1, -1}) {
        const auto g = single_mode_step(0.3, 1.7, region);
        EXPECT_LT(max_abs(g.alpha - g.gamma), 1e-15);
        EXPECT_NEAR(g.alpha.determinant(), 1.0, 1e-13);
    }
    EXPECT_THROW(single_mode_step(0.3, 1.7, 0), std::invalid_argument);
}

TEST(Mbqc, TwoStepRotation)
{
    for (double phi : {0.3, 1.2, -2.0}) {
        const auto s = solve_rotation(phi, 1, 3);
        const auto& t = s.theta;
        const Mat2 g = single_mode_step(t[2], t[3], 1).alpha * single_mode_step(t[0], t[1], 1).alpha;
        EXPECT_LT(max_abs(g - R2(phi)), 1e-11);
    }
}

TEST(Mbqc, MeasurementFactorization)
{
    const auto f = measurement_factorization_check(30, 9);
    EXPECT_LT(f.bjk, 1e-12);
    EXPECT_LT(f.foursplitter, 1e-12);
    EXPECT_LT(f.partial, 1e-12);
    EXPECT_GT(f.control, 1e-3);
}

TEST(Mbqc, PermutationIsSignedPermutation)
{
    const auto m = permute_measurement({1, 0, 3, 2}, {0.1, 0.2, 0.3, 0.4});
    EXPECT_LT(max_abs(m.M * m.M.transpose() - Eigen::Matrix4d::Identity()), 1e-12);
    for (int i = 0; i < 16; ++i) {
        const double v = std::abs(m.M.data()[i]);
        EXPECT_TRUE(v < 1e-12 || std::abs(v - 1) < 1e-12);
    }
    EXPECT_LT(m.deviation, 1e-12);
    // identity permutation keeps the angles
    const auto id = permute_measurement({0, 1, 2, 3}, {0.1, 0.2, 0.3, 0.4});
    EXPECT_DOUBLE_EQ(id.angles[2], 0.3);
    EXPECT_THROW(permute_measurement({0, 0, 1, 2}, {0, 0, 0, 0}), std::invalid_argument);
}

TEST(Mbqc, Gymnastics)
{
    for (int c : {0, 1}) {
        const auto g = gymnastics_check(c, 0.8);
        EXPECT_LT(g.core, 1e-12);
        EXPECT_LT(g.insert, 1e-12);
        EXPECT_LT(g.exchange, 1e-12);
        EXPECT_LT(g.partner, 1e-12);
        EXPECT_EQ(g.mode_list.size(), 10u);
    }
}

TEST(Mbqc, WRestrictions)
{
    const WAngles th{{0.3, 0.5, -0.2, 0.9}, {1.4, -1.1, 0.7, 2.2}, {0.4, 1.2, -0.6, 0.3}};
    for (int w = 1; w <= 3; ++w)
        for (int r : {1, -1}) EXPECT_LT(check_w_restriction(w, th, r).deviation, 1e-12) << w << " " << r;
    EXPECT_THROW(check_w_restriction(4, th, 1), std::invalid_argument);
}

TEST(Mbqc, WIsSymplectic)
{
    const WAngles th{{0.3, 0.5, -0.2, 0.9}, {1.4, -1.1, 0.7, 2.2}, {0.4, 1.2, -0.6, 0.3}};
    const Mat s = entangle_W(th, 1).S;
    const Mat om = symplectic_form(4);
    EXPECT_LT(max_abs(s * om * s.transpose() - om), 1e-12);
}

TEST(Mbqc, GToCz)
{
    EXPECT_NEAR(g_to_cz(pi / 2, 1).g, 0.0, 1e-15);
    EXPECT_NEAR(g_to_cz(pi / 4, -1).g, 2.0, 1e-12);
    EXPECT_LT(g_to_cz(1.1, 1).deviation, 1e-12);
    EXPECT_THROW(g_to_cz(0.0, 1), std::domain_error);
}

TEST(Mbqc, LatticeBasisIsOrthogonal)
{
    const auto lat = small_lattice();
    const Mat& m = lat.basis();
    EXPECT_LT(max_abs(m.transpose() * m - Mat::Identity(m.rows(), m.cols())), 1e-12);
}

TEST(Mbqc, WirePatternConverges)
{
    const auto lat = small_lattice();
    std::mt19937_64 rng(2);
    for (int k = 0; k < 3; ++k) {
        const auto wp = random_wire_pattern(lat, rng, 1 + k);
        const int n = wp.compiled.modes();
        std::vector<double> rs{2, 4, 6}, err;
        for (double r : rs) {
            const auto res = simulate_pattern(lat, wp.pattern, GaussianState::vacuum(n), r);
            err.push_back((res.output.cov - wp.compiled.S * wp.compiled.S.transpose() / 2).norm());
        }
        EXPECT_NEAR(fit_convergence(rs, err).slope, -2.0, 0.1);
    }
}

TEST(Mbqc, ZeroSqueezingDecouplesInput)
{
    const auto lat = small_lattice();
    std::mt19937_64 rng(4);
    const auto wp = random_wire_pattern(lat, rng, 1);
    const auto res = simulate_pattern(lat, wp.pattern, GaussianState::vacuum(1), 0.0);
    EXPECT_LT(max_abs(res.gain), 1e-12);
}

TEST(Mbqc, UncoveredModesListed)
{
    const auto lat = small_lattice();
    std::mt19937_64 rng(4);
    auto wp = random_wire_pattern(lat, rng, 1);
    wp.pattern.angles.erase(wp.pattern.angles.begin());
    try {
        simulate_pattern(lat, wp.pattern, GaussianState::vacuum(1), 2.0);
        FAIL() << "expected an uncovered-mode error";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("simulate_pattern"), std::string::npos);
    }
}

TEST(Mbqc, Registry)
{
    LogicalRegistry reg;
    const DistributedMode a{{1, 0}, 0}, b{{5, 0}, 0};
    const int w = reg.open(a);
    EXPECT_THROW(reg.open(a), std::invalid_argument);
    reg.move(w, b);
    EXPECT_EQ(reg.where(w), b);
    EXPECT_EQ(reg.history(w).size(), 2u);
}

TEST(Mbqc, ConvergenceFitSlope)
{
    std::vector<double> r{1, 2, 3}, e;
    for (double x : r) e.push_back(5 * std::exp(-2 * x));
    EXPECT_NEAR(fit_convergence(r, e).slope, -2.0, 1e-12);
}
