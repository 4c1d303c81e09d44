#include "cvchip/mbqc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvchip {

using std::numbers::pi;

Mat2 R2(double theta) { return rotation(theta).S; }
Mat2 V2(double theta1, double theta2) { return v_gate(theta1, theta2).S; }

namespace {

SymplecticGate single(const Mat2& s) { return {s, Vec::Zero(2)}; }

SymplecticGate on(int n, int mode, const Mat2& s) { return embed(single(s), {mode}, n); }

}  // namespace

SymplecticGate teleport(double theta1, double theta2, double m1, double m2)
{
    const double sn = std::sin(theta1 - theta2);
    if (std::abs(sn) < 1e-12) throw std::domain_error("singular measurement pair");
    const cplx i(0.0, 1.0);
    const cplx a = (-i * std::exp(i * theta2) * m1 - i * std::exp(i * theta1) * m2) / sn;
    return displacement(a) * v_gate(theta1, theta2);
}

GaussianState teleport_simulated(double theta1, double theta2, double m1, double m2, double r,
                                 const GaussianState& input)
{
    if (input.modes() != 1) throw std::invalid_argument("teleport_simulated: single-mode input");
    GaussianState s = GaussianState::vacuum(3);
    s.cov(0, 0) = input.cov(0, 0), s.cov(0, 3) = input.cov(0, 1);
    s.cov(3, 0) = input.cov(1, 0), s.cov(3, 3) = input.cov(1, 1);
    s.mean(0) = input.mean(0), s.mean(3) = input.mean(1);

    // p-squeezed modes 1, 2 joined by C_Z(1)
    SymplecticGate sq = SymplecticGate::identity(3);
    for (int m : {1, 2}) sq.S(m, m) = std::exp(r), sq.S(3 + m, 3 + m) = std::exp(-r);
    s = (embed(cz_gate(1.0), {1, 2}, 3) * sq).apply(s);
    s = bsg_matrix(0, 1, 3).apply(s);

    Mat c(2, 6);
    c.row(0) = homodyne_row(3, 0, theta1).transpose();
    c.row(1) = homodyne_row(3, 1, theta2).transpose();
    Vec m(2);
    m << m1, m2;
    return remove_modes(condition_rows(s, c, m), {0, 1});
}

StepGates single_mode_step(double theta_a, double theta_b, int region)
{
    if (region != 1 && region != -1) throw std::invalid_argument("region must be +1 or -1");
    const double s = region * pi / 4;
    const Mat2 g = V2(s, -s) * V2(theta_a, theta_b);
    return {g, g};
}

TwoStepSolution solve_rotation(double phi, int region, std::uint64_t seed)
{
    const Mat2 target = R2(phi);
    auto residual = [&](const Eigen::Vector4d& x) {
        const Mat2 g = single_mode_step(x(2), x(3), region).alpha * single_mode_step(x(0), x(1), region).alpha;
        const Mat2 d = g - target;
        return Eigen::Vector4d(d(0, 0), d(0, 1), d(1, 0), d(1, 1));
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, pi);
    for (int attempt = 0; attempt < 50; ++attempt) {
        Eigen::Vector4d x(u(rng), 0, u(rng), 0);
        x(1) = x(0) + pi / 2 + (u(rng) - pi / 2) / 3;
        x(3) = x(2) + pi / 2 + (u(rng) - pi / 2) / 3;
        try {
            for (int it = 0; it < 100; ++it) {
                const Eigen::Vector4d f = residual(x);
                if (f.norm() < 1e-14) break;
                Eigen::Matrix4d jac;
                for (int k = 0; k < 4; ++k) {
                    Eigen::Vector4d h = Eigen::Vector4d::Zero();
                    h(k) = 1e-7;
                    jac.col(k) = (residual(x + h) - residual(x - h)) / 2e-7;
                }
                // the map has rank 3; drop the null direction
                Eigen::JacobiSVD<Eigen::Matrix4d> svd(jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
                svd.setThreshold(1e-6);
                Eigen::Vector4d step = svd.solve(f);
                double lam = 1.0;
                while (lam > 1e-4 && residual(x - lam * step).norm() > f.norm()) lam /= 2;
                x -= lam * step;
            }
            const double res = residual(x).norm();
            if (res < 1e-12) return {{x(0), x(1), x(2), x(3)}, region, res};
        } catch (const std::domain_error&) {
            // landed on a singular V, restart
        }
    }
    throw std::runtime_error("solve_rotation: no convergence");
}

SymplecticGate g_gate(int j, int k, int n, double s, const std::array<double, 6>& t)
{
    const SymplecticGate b = bsg_matrix(j, k, n);
    const SymplecticGate mid = on(n, j, V2(s, t[4])) * on(n, k, V2(t[5], s));
    const SymplecticGate first = on(n, j, V2(t[0], t[1])) * on(n, k, V2(t[2], t[3]));
    return b * mid * b * first;
}

SymplecticGate entangle_W(const WAngles& th, int region)
{
    if (region != 1 && region != -1) throw std::invalid_argument("region must be +1 or -1");
    const double s = region * pi / 4;
    enum { D, A, B, C };
    const SymplecticGate a4 = passive(foursplitter_annihilation());
    SymplecticGate first = SymplecticGate::identity(4);
    for (int m = 0; m < 4; ++m) first = on(4, m, V2(th.Ra[m], th.Rb[m])) * first;
    const SymplecticGate mid = on(4, A, V2(s, th.I[1])) * on(4, B, V2(s, th.I[2])) *
                               on(4, C, V2(th.I[3], s)) * on(4, D, V2(th.I[0], s));
    return a4 * mid * a4 * first;
}

WRestriction check_w_restriction(int which, WAngles th, int region)
{
    enum { D, A, B, C };
    auto& I = th.I;
    switch (which) {
    case 1: I[1] = I[0], I[3] = I[2]; break;
    case 2: I[3] = I[1], I[2] = I[0]; break;
    case 3: I[3] = I[0], I[2] = I[1]; break;
    default: throw std::invalid_argument("W restriction must be 1..3");
    }
    const double s = region * pi / 4;
    auto G = [&](int j, int k, double t5, double t6) {
        return g_gate(j, k, 4, s, {th.Ra[j], th.Rb[j], th.Ra[k], th.Rb[k], t5, t6});
    };
    auto Rpi = [](int m) { return on(4, m, R2(pi)); };

    SymplecticGate f;
    if (which == 1) f = Rpi(B) * Rpi(D) * G(D, B, I[0], I[2]) * G(A, C, I[0], I[2]);
    if (which == 2) f = Rpi(A) * Rpi(D) * G(D, A, I[0], I[1]) * G(B, C, I[0], I[1]);
    if (which == 3) f = G(D, C, I[0], I[1]) * G(A, B, I[0], I[1]) * Rpi(B) * Rpi(D);
    const Mat diff = entangle_W(th, region).S - f.S;
    return {which, diff.cwiseAbs().maxCoeff()};
}

CzReport g_to_cz(double phi, int sign)
{
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    if (std::abs(std::sin(phi)) < 1e-12) throw std::domain_error("g_to_cz: cot(phi) singular");
    const double p8 = pi / 8, sg = sign;
    const std::array<double, 6> t{-sg * p8, 3 * sg * p8, -sg * p8, 3 * sg * p8, phi + sg * pi / 4,
                                  -phi + sg * pi / 4};
    const SymplecticGate lhs = g_gate(0, 1, 2, sg * pi / 4, t);
    const double g = 2.0 / std::tan(phi);
    const SymplecticGate rhs = on(2, 0, R2(-sg * 3 * pi / 4)) * on(2, 1, R2(sg * pi / 4)) * cz_gate(g);
    return {g, (lhs.S - rhs.S).cwiseAbs().maxCoeff()};
}

}  // namespace cvchip
