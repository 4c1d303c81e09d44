#include "cvchip/io.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cvchip;

namespace {

QuantumRingConfig quantum() { return default_config().quantum.ring; }

double sympl_min_eig(const Eigen::Matrix4d& cov)
{
    GaussianState s{Vec::Zero(4), cov};
    return s.uncertainty_margin();
}

}  // namespace

TEST(Squeezer, UniqueBelowThresholdRoot)
{
    auto cfg = quantum();
    cfg.pump_model = PumpModel::steady_state;
    const auto s = steady_pump_amplitude(cfg);
    EXPECT_EQ(s.real_roots, 1);
    EXPECT_LT(s.residual, 1e-10);
    EXPECT_GT(s.photons, 0.0);
}

TEST(Squeezer, LockedPumpCalibration)
{
    const RingModel m(quantum());
    EXPECT_NEAR(m.epsilon() / m.kappa(), 0.425, 0.005);
    EXPECT_LT(m.epsilon(), 0.5 * m.kappa());  // below oscillation
}

TEST(Squeezer, LosslessPairIsPure)
{
    auto cfg = quantum();
    cfg.kappa_i_override = 0;
    const RingModel m(cfg);
    for (double w : {0.0, 0.3 * m.kappa(), -1.1 * m.kappa()}) {
        const auto cov = m.pair_covariance(5, w, 1.0);
        // pure Gaussian: (2 cov Omega)^2 = -I; the determinant is too ill-conditioned near omega = 0
        const Eigen::Matrix4d om = symplectic_form(2);
        const Eigen::Matrix4d x = 2 * cov * om;
        EXPECT_LT((x * x + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-10 * cov.squaredNorm());
        EXPECT_GT(sympl_min_eig(cov), -1e-10);
    }
}

TEST(Squeezer, LossyPairIsPhysicalAndMixed)
{
    const RingModel m(quantum());
    const auto cov = m.pair_covariance(11, 0.2 * m.kappa(), 0.8);
    EXPECT_LT((cov - cov.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_GT(sympl_min_eig(cov), -1e-12);
    EXPECT_GT((2 * cov).determinant(), 1.0);
}

TEST(Squeezer, AttenuationOracle)
{
    Mat c = Mat::Identity(2, 2) * 3.0;
    const Mat a = attenuate(c, 0.25);
    EXPECT_NEAR(a(0, 0), 0.25 * 3 + 0.75 * 0.5, 1e-15);
}

TEST(Squeezer, LossBudgetInDb)
{
    const LossBudget b;
    EXPECT_DOUBLE_EQ(b.total_db(0), 0.0);
    EXPECT_NEAR(b.total_db(1), 0.28, 1e-12);
    EXPECT_NEAR(b.total_db(2), 2 * 0.28 + 0.1 * 1.5127, 1e-12);
    EXPECT_NEAR(b.eta(1), std::pow(10.0, -0.028), 1e-12);
}

TEST(Squeezer, LadderWithinTolerance)
{
    const auto cfg = default_config();
    const double want[4] = {10.18, 8.17, 6.25, 4.03};
    for (int d = 0; d < 4; ++d) {
        const auto s = nullifier_spectrum(d, cfg.quantum.ring, cfg.loss, 1);
        EXPECT_NEAR(s.max_squeezing_db(), want[d], 0.3) << "d = " << d;
        EXPECT_GT(s.antisqueezing_at_max_db(), s.max_squeezing_db());
    }
}

TEST(Squeezer, LosslessZeroDSpectrumSumsToZeroDb)
{
    auto cfg = quantum();
    cfg.kappa_i_override = 0;
    const auto s = nullifier_spectrum_eta(0, cfg, 1.0, 3, {101, 3.0});
    for (std::size_t i = 0; i < s.omega.size(); ++i)
        EXPECT_NEAR(s.squeezed_db[i] + s.antisqueezed_db[i], 0.0, 1e-8);
}

TEST(Squeezer, SqueezingFallsWithModeIndex)
{
    const RingModel m(quantum());
    const SpectrumGrid g{401, 5.0};
    EXPECT_GT(pair_max_squeezing_db(m, 1, g), pair_max_squeezing_db(m, 1201, g));
    EXPECT_LT(pair_max_squeezing_db(m, 3001, g), 3.0);
}

TEST(Squeezer, GeometryConfigKeepsCoupling)
{
    const auto base = quantum();
    const auto c = config_for_geometry(base, table_geometries()[3], 9.32e9);
    EXPECT_NEAR(RingModel(c).epsilon() / RingModel(base).epsilon(), 1.0, 1e-9);
    EXPECT_NEAR(1 / (c.profile.beta[0] * c.cavity.L), 9.32e9, 1.0);
}

TEST(Squeezer, RejectsEvenModeIndex)
{
    EXPECT_THROW(nullifier_spectrum_eta(0, quantum(), 1.0, 2), std::invalid_argument);
}
