#include "cvchip/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace cvchip {

SymplecticGate SymplecticGate::identity(int n)
{
    return {Mat::Identity(2 * n, 2 * n), Vec::Zero(2 * n)};
}

SymplecticGate SymplecticGate::operator*(const SymplecticGate& rhs) const
{
    if (modes() != rhs.modes()) throw std::invalid_argument("gate size mismatch");
    return {S * rhs.S, S * rhs.d + d};
}

GaussianState SymplecticGate::apply(const GaussianState& s) const
{
    return {S * s.mean + d, S * s.cov * S.transpose()};
}

double SymplecticGate::symplectic_error() const
{
    const Mat om = symplectic_form(modes());
    return (S * om * S.transpose() - om).norm();
}

SymplecticGate passive(const CMat& u)
{
    const auto n = u.rows();
    SymplecticGate g{Mat(2 * n, 2 * n), Vec::Zero(2 * n)};
    g.S << u.real(), -u.imag(), u.imag(), u.real();
    return g;
}

SymplecticGate embed(const SymplecticGate& g, const std::vector<int>& modes, int n)
{
    const int k = g.modes();
    if (static_cast<int>(modes.size()) != k) throw std::invalid_argument("embed: mode list size");
    SymplecticGate out = SymplecticGate::identity(n);
    std::vector<int> idx(2 * k);
    for (int a = 0; a < k; ++a) {
        if (modes[a] < 0 || modes[a] >= n) throw std::out_of_range("embed: mode index");
        idx[a] = modes[a];
        idx[k + a] = n + modes[a];
    }
    for (int a = 0; a < 2 * k; ++a) {
        out.d(idx[a]) = g.d(a);
        for (int b = 0; b < 2 * k; ++b) out.S(idx[a], idx[b]) = g.S(a, b);
    }
    return out;
}

SymplecticGate direct_sum(const std::vector<SymplecticGate>& gates)
{
    int n = 0;
    for (const auto& g : gates) n += g.modes();
    SymplecticGate out = SymplecticGate::identity(n);
    int off = 0;
    for (const auto& g : gates) {
        std::vector<int> m(g.modes());
        for (int a = 0; a < g.modes(); ++a) m[a] = off + a;
        out = embed(g, m, n) * out;
        off += g.modes();
    }
    return out;
}

SymplecticGate bsg_matrix(int j, int k, int n)
{
    if (j == k) throw std::invalid_argument("bsg_matrix: modes must differ");
    CMat b(2, 2);
    b << 1.0, -1.0, 1.0, 1.0;
    b /= std::sqrt(2.0);
    return embed(passive(b), {j, k}, n);
}

CMat foursplitter_annihilation()
{
    CMat a(4, 4);
    a << 1, -1, -1, 1,
         1, 1, -1, -1,
         1, -1, 1, -1,
         1, 1, 1, 1;
    return a / 2.0;
}

SymplecticGate foursplitter_matrix(int j, int k, int l, int m, int n)
{
    return bsg_matrix(j, k, n) * bsg_matrix(l, m, n) * bsg_matrix(j, l, n) * bsg_matrix(k, m, n);
}

SymplecticGate rotation(double theta)
{
    SymplecticGate g = SymplecticGate::identity(1);
    const double c = std::cos(theta), s = std::sin(theta);
    g.S << c, -s, s, c;
    return g;
}

SymplecticGate squeezer(double s)
{
    if (s == 0.0) throw std::invalid_argument("squeezer: s must be nonzero");
    SymplecticGate g = SymplecticGate::identity(1);
    // s < 0 is diag(|s|, 1/|s|) followed by R(pi)
    g.S << s, 0.0, 0.0, 1.0 / s;
    return g;
}

SymplecticGate displacement(cplx alpha)
{
    SymplecticGate g = SymplecticGate::identity(1);
    g.d << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
    return g;
}

SymplecticGate v_gate(double theta1, double theta2)
{
    const double t = std::tan(0.5 * (theta1 - theta2));
    if (!std::isfinite(t) || std::abs(t) < 1e-12 || std::abs(t) > 1e12)
        throw std::domain_error("singular teleportation gate");
    const SymplecticGate r = rotation(0.5 * (theta1 + theta2));
    return r * squeezer(t) * r;
}

SymplecticGate cz_gate(double g)
{
    SymplecticGate c = SymplecticGate::identity(2);
    c.S(2, 1) = g;
    c.S(3, 0) = g;
    return c;
}

}  // namespace cvchip
