#include "cvchip/squeezer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cvchip {

using std::numbers::pi;
using cd = std::complex<double>;

namespace {

struct Ring {
    double w0, kappa, kappa_i, kappa_o, g0;
};

Ring ring_of(const QuantumRingConfig& cfg)
{
    const double w0 = cfg.profile.omega0();
    auto lw = linewidths(cfg.cavity, w0);
    if (cfg.kappa_i_override >= 0) lw.kappa_i = cfg.kappa_i_override, lw.kappa = lw.kappa_o + lw.kappa_i;
    const double g = cfg.g0 > 0 ? cfg.g0 : g0(cfg.cavity, cfg.profile);
    return {w0, lw.kappa, lw.kappa_i, lw.kappa_o, g};
}

// real roots of a x^3 + b x^2 + c x + d, Newton-polished
std::vector<double> cubic_roots(double a, double b, double c, double d)
{
    std::vector<double> r;
    if (a == 0.0) {
        if (b == 0.0) {
            if (c != 0.0) r.push_back(-d / c);
            return r;
        }
        const double disc = c * c - 4 * b * d;
        if (disc >= 0) {
            const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
            r.push_back(q / b);
            if (q != 0) r.push_back(d / q);
        }
        return r;
    }
    const double B = b / a, Cc = c / a, D = d / a;
    const double Q = (B * B - 3 * Cc) / 9;
    const double R = (2 * B * B * B - 9 * B * Cc + 27 * D) / 54;
    if (R * R < Q * Q * Q) {
        const double th = std::acos(std::clamp(R / std::sqrt(Q * Q * Q), -1.0, 1.0));
        const double m = -2 * std::sqrt(Q);
        for (int k = 0; k < 3; ++k) r.push_back(m * std::cos((th + 2 * pi * k) / 3) - B / 3);
    } else {
        const double A = -std::copysign(std::cbrt(std::abs(R) + std::sqrt(R * R - Q * Q * Q)), R);
        const double Bq = A == 0 ? 0 : Q / A;
        r.push_back(A + Bq - B / 3);
    }
    for (double& x : r)
        for (int it = 0; it < 8; ++it) {
            const double f = ((a * x + b) * x + c) * x + d;
            const double df = (3 * a * x + 2 * b) * x + c;
            if (df == 0) break;
            x -= f / df;
        }
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

PumpSolution steady_pump_amplitude(const QuantumRingConfig& cfg)
{
    const Ring ring = ring_of(cfg);
    const double s = cfg.sigma, g = ring.g0, k = ring.kappa;
    // x (k^2/4 + (s + g x)^2) = kappa_o P / (hbar w0)
    const double F = ring.kappa_o * cfg.P_in / (phys::hbar * ring.w0);
    auto roots = cubic_roots(g * g, 2 * s * g, k * k / 4 + s * s, -F);
    std::erase_if(roots, [](double x) { return x < 0; });
    const int n = static_cast<int>(roots.size());
    if (n != 1)
        throw std::domain_error("steady_pump_amplitude: " + std::to_string(n) +
                                " physical branches; pump state is ambiguous");
    const double x = roots.front();
    const double res = std::abs(x * (k * k / 4 + (s + g * x) * (s + g * x)) - F) / F;
    const cd a_in = std::sqrt(cfg.P_in / (phys::hbar * ring.w0));
    const cd A0 = std::sqrt(ring.kappa_o) * a_in / cd(k / 2, -(s + g * x));
    return {x, A0, n, res};
}

RingModel::RingModel(const QuantumRingConfig& cfg)
{
    const Ring ring = ring_of(cfg);
    omega0_ = ring.w0;
    kappa_ = ring.kappa;
    kappa_i_ = ring.kappa_i;
    kappa_o_ = ring.kappa_o;
    g0_ = ring.g0;
    sigma_ = cfg.sigma;
    if (cfg.pump_model == PumpModel::resonance_locked)
        photons_ = 4 * kappa_o_ * cfg.P_in / (phys::hbar * omega0_ * kappa_ * kappa_);
    else
        photons_ = steady_pump_amplitude(cfg).photons;
    eps_ = g0_ * photons_;
    if (!cfg.zeta.empty()) {
        zeta_ = cfg.zeta;
    } else {
        const auto z = zeta_from_beta(cfg.profile, cfg.cavity.L);
        zeta_ = {z.z2, z.z3};
    }
}

cd RingModel::J(long l) const
{
    // dispersion shift without the linear FSR term
    const double shift = resonance_offset(l, 0.0, zeta_);
    return {-kappa_ / 2, sigma_ - shift + 2 * eps_};
}

Eigen::Matrix2cd RingModel::M(long l, double omega) const
{
    const cd iw(0.0, omega), ie(0.0, eps_);
    Eigen::Matrix2cd m;
    m << J(l) + iw, ie, -ie, std::conj(J(-l)) + iw;
    return m;
}

Eigen::Matrix4d RingModel::pair_covariance(long l, double omega, double eta) const
{
    if (eta < 0 || eta > 1) throw std::invalid_argument("transmissivity outside [0,1]");
    const Eigen::Matrix2cd m = M(l, omega);
    if (std::abs(m.determinant()) < 1e-300 * (kappa_ * kappa_))
        throw std::domain_error("threshold crossed at sideband");
    const Eigen::Matrix2cd mi = m.inverse();
    // (a_l, a_-l^dag)_out = T_i (v_l, v_-l^dag)_i + T_o (v_l, v_-l^dag)_o
    const Eigen::Matrix2cd ti = -std::sqrt(kappa_i_ * kappa_o_) * mi;
    const Eigen::Matrix2cd to = -kappa_o_ * mi - Eigen::Matrix2cd::Identity();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
    for (const auto* t : {&ti, &to}) {
        // a_l = T00 v + T01 w^dag, a_-l = conj(T11) w + conj(T10) v^dag
        Eigen::Matrix2cd u, w;
        u << (*t)(0, 0), 0.0, 0.0, std::conj((*t)(1, 1));
        w << 0.0, (*t)(0, 1), std::conj((*t)(1, 0)), 0.0;
        Eigen::Matrix4d s;
        s << (u + w).real(), -(u - w).imag(), (u + w).imag(), (u - w).real();
        cov += 0.5 * s * s.transpose();
    }
    return eta * cov + 0.5 * (1 - eta) * Eigen::Matrix4d::Identity();
}

Eigen::Matrix4d pair_output_covariance(const QuantumRingConfig& cfg, long l, double omega, double eta)
{
    return RingModel(cfg).pair_covariance(l, omega, eta);
}

Mat attenuate(const Mat& cov, double eta)
{
    if (eta < 0 || eta > 1) throw std::invalid_argument("transmissivity outside [0,1]");
    return eta * cov + 0.5 * (1 - eta) * Mat::Identity(cov.rows(), cov.cols());
}

double LossBudget::total_db(int d) const
{
    if (d < 0 || d > 3) throw std::invalid_argument("loss: dimension must be 0..3");
    return ibs_count[d] * ibs_insertion_db + dl_count[d] * dl_length_m * dl_per_meter_db +
           crossing_count[d] * crossing_db;
}

double LossBudget::eta(int d) const { return std::pow(10.0, -total_db(d) / 10); }

}  // namespace cvchip
