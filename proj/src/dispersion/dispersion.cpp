#include "cvchip/dispersion.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvchip {

using std::numbers::pi;

double DispersionProfile::omega0() const { return 2 * pi * phys::c / lambda0; }

void DispersionProfile::validate() const
{
    if (beta[0] <= 0) throw std::invalid_argument("beta1 must be positive");
    if (lambda0 <= 0) throw std::invalid_argument("lambda0 must be positive");
}

void CavitySpec::validate() const
{
    if (L <= 0) throw std::invalid_argument("circumference must be positive");
    if (Q_loaded <= 0 || Q_intrinsic < Q_loaded)
        throw std::invalid_argument("need Q_intrinsic >= Q_loaded > 0");
    if (mode_volume() <= 0) throw std::invalid_argument("mode volume must be positive");
}

Linewidths linewidths(const CavitySpec& cav, double omega0)
{
    cav.validate();
    const double k = omega0 / cav.Q_loaded;
    const double ki = omega0 / cav.Q_intrinsic;
    return {k, ki, k - ki};
}

Zeta23 zeta_from_beta(const DispersionProfile& p, double L)
{
    const double b1 = p.beta[0], b2 = p.beta[1], b3 = p.beta[2];
    if (b1 == 0.0) throw std::invalid_argument("beta1 = 0");
    return {-4 * pi * pi * b2 / (L * L * b1 * b1 * b1),
            8 * pi * pi * pi * (3 * b2 * b2 - b1 * b3) / (L * L * L * std::pow(b1, 5))};
}

std::vector<double> zeta_numeric(const DispersionProfile& p, double L, int order, int lmax)
{
    p.validate();
    if (order < 2) return {};
    const double dw = 2 * pi / (p.beta[0] * L);
    // (beta(w0+x) - beta0) L - 2 pi l, Newton from the linear guess
    auto dbeta = [&](double x, double& deriv) {
        double v = 0, d = 0, xp = 1, fact = 1;
        for (int s = 1; s <= 8; ++s) {
            fact *= s;
            d += p.beta_s(s) * xp / (fact / s);
            xp *= x;
            v += p.beta_s(s) * xp / fact;
        }
        deriv = d;
        return v;
    };
    const int n = 2 * lmax + 1;
    Eigen::MatrixXd a(n, order - 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const int l = i - lmax;
        double x = l * dw;
        for (int it = 0; it < 50; ++it) {
            double d;
            const double f = dbeta(x, d) * L - 2 * pi * l;
            const double step = f / (d * L);
            x -= step;
            if (std::abs(step) < 1e-16 * (1 + std::abs(x))) break;
        }
        // scaled columns (l/lmax)^s keep the fit well conditioned
        y(i) = x - l * dw;
        const double u = static_cast<double>(l) / lmax;
        for (int s = 2; s <= order; ++s) a(i, s - 2) = std::pow(u, s);
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    std::vector<double> z(order - 1);
    double fact = 1;
    for (int s = 2; s <= order; ++s) {
        fact *= s;
        z[s - 2] = c(s - 2) * fact / std::pow(static_cast<double>(lmax), s);
    }
    return z;
}

double resonance_offset(long l, double dw, const std::vector<double>& zeta)
{
    // Neumaier summation, terms grow fast with |l|
    double sum = static_cast<double>(l) * dw, comp = 0.0;
    double lp = static_cast<double>(l), fact = 1.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        const int s = static_cast<int>(i) + 2;
        lp *= static_cast<double>(l);
        fact *= s;
        const double term = zeta[i] * lp / fact;
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double resonant_frequency(long l, double omega0, double dw, const std::vector<double>& zeta)
{
    return omega0 + resonance_offset(l, dw, zeta);
}

double fsr(double ng, double L)
{
    if (ng <= 0 || L <= 0) throw std::invalid_argument("fsr needs ng, L > 0");
    return phys::c / (ng * L);
}

double g0(const CavitySpec& cav, const DispersionProfile& p)
{
    const double w0 = p.omega0();
    return phys::hbar * w0 * w0 * cav.n2 * phys::c / (p.n0 * p.n0 * cav.mode_volume());
}

double gamma_eff(const CavitySpec& cav, const DispersionProfile& p)
{
    return cav.n2 * p.omega0() * cav.L / (phys::c * cav.mode_volume());
}

double phase_mismatch(long l, double zeta2, double g0v, double pump_photons)
{
    const double ld = static_cast<double>(l);
    return (zeta2 * ld * ld - 2 * g0v * pump_photons) / phys::c;
}

}  // namespace cvchip
