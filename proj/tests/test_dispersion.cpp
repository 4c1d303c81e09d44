#include "cvchip/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cvchip;

TEST(Dispersion, FsrOfClassicalRing)
{
    EXPECT_NEAR(fsr(2.05, 15.7e-3), 299792458.0 / (2.05 * 15.7e-3), 1e-3);
    EXPECT_THROW(fsr(0, 1), std::invalid_argument);
}

TEST(Dispersion, ClosedFormZetaMatchesRootSolve)
{
    const auto cfg = default_config();
    const auto& p = cfg.quantum.ring.profile;
    const double L = cfg.quantum.ring.cavity.L;
    const auto z = zeta_from_beta(p, L);
    const auto n = zeta_numeric(p, L, 5, 200);
    EXPECT_NEAR(n[0] / z.z2, 1.0, 1e-6);
    EXPECT_NEAR(n[1] / z.z3, 1.0, 1e-4);
}

TEST(Dispersion, ZetaSignFollowsBeta2)
{
    // anomalous GVD -> resonances bend upward
    auto p = default_config().ring.profile;
    EXPECT_GT(zeta_from_beta(p, 15.7e-3).z2, 0.0);
    p.beta[1] = -p.beta[1];
    EXPECT_LT(zeta_from_beta(p, 15.7e-3).z2, 0.0);
}

TEST(Dispersion, ResonanceOffsetSeries)
{
    const double dw = 2 * std::numbers::pi * 9.32e9;
    const std::vector<double> z{1e5, -20.0};
    EXPECT_DOUBLE_EQ(resonance_offset(0, dw, z), 0.0);
    EXPECT_NEAR(resonance_offset(3, dw, z), 3 * dw + 1e5 * 9 / 2 - 20.0 * 27 / 6, 1e-3);
    EXPECT_NEAR(resonance_offset(-3, dw, z) + resonance_offset(3, dw, z), 2 * 1e5 * 9 / 2, 1e-3);
    EXPECT_DOUBLE_EQ(resonant_frequency(1, 5.0, dw, {}), 5.0 + dw);
}

TEST(Dispersion, NonlinearCoefficientNearPrinted)
{
    const auto cfg = default_config();
    EXPECT_NEAR(gamma_eff(cfg.ring.cavity, cfg.ring.profile), 0.59, 0.59 * 0.005);
    EXPECT_GT(g0(cfg.ring.cavity, cfg.ring.profile), 0.0);
}

TEST(Dispersion, LinewidthsSplit)
{
    const auto cfg = default_config();
    const double w0 = cfg.ring.profile.omega0();
    const auto lw = linewidths(cfg.ring.cavity, w0);
    EXPECT_NEAR(lw.kappa, w0 / 2e6, 1e-6 * lw.kappa);
    EXPECT_NEAR(lw.kappa_i + lw.kappa_o, lw.kappa, 1e-9 * lw.kappa);
    EXPECT_NEAR(lw.kappa_i / lw.kappa, 2e6 / 2.22e7, 1e-12);
}

TEST(Dispersion, PhaseMismatchVanishesWherePumpCancelsDispersion)
{
    const double z2 = 2e5, g = 0.1, n = 1e6;
    const long l = std::lround(std::sqrt(2 * g * n / z2));
    EXPECT_NEAR(phase_mismatch(0, z2, g, n), -2 * g * n / phys::c, 1e-20);
    EXPECT_LT(std::abs(phase_mismatch(l, z2, g, n)), std::abs(phase_mismatch(0, z2, g, n)));
}

TEST(Dispersion, InvalidInputs)
{
    CavitySpec c;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    DispersionProfile p;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}
