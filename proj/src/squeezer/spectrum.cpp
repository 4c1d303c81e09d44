#include "cvchip/cluster.hpp"
#include "cvchip/squeezer.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace cvchip {

namespace {

// 2x2 form [[A, -B], [-B, D]] of var(theta) = c^2 A - 2 c s B + s^2 D
struct Form2 {
    double A = 0, B = 0, D = 0;
};

struct Extremes {
    double lo, hi, theta;
};

Extremes extremes(const Form2& f)
{
    const double m = 0.5 * (f.A + f.D);
    const double r = std::hypot(0.5 * (f.A - f.D), f.B);
    // minimizing theta: eigenvector of the small eigenvalue is (cos, sin)
    double th = 0.5 * std::atan2(-2 * f.B, f.A - f.D) + std::numbers::pi / 2;
    th = std::fmod(th + std::numbers::pi, std::numbers::pi);
    return {m - r, m + r, th};
}

// nullifier as source-pair weights: (k, c_k, c_-k)
struct PairWeight {
    long k;
    double c_plus, c_minus;
};

struct Combination {
    std::vector<PairWeight> pairs;
    double vacuum;  // 1/2 sum c^2
};

Combination target_combination(int dimension, long l)
{
    if (l % 2 == 0) throw std::invalid_argument("nullifier_spectrum: l must be odd");
    ChipProgram prog;
    prog.dimension = dimension;
    prog.l_max = static_cast<int>(std::max<long>(15, std::abs(l) + 8));
    prog.t_max = 3;
    const ClusterGraph g = build(prog);
    const ModeLabel target{'a', static_cast<int>(l), dimension >= 2 ? 1 : 0};
    const int t = g.index(target);

    std::map<int, double> c;
    auto add_row = [&](int m, double w) {
        for (auto [s, v] : g.network[m]) c[s] += w * v;
    };
    add_row(t, 1.0);
    for (auto [j, w] : g.graph.row(t)) add_row(j, w);

    Combination out{{}, 0.0};
    for (auto [s, v] : c) out.vacuum += 0.5 * v * v;
    for (auto [s, v] : c) {
        const auto& src = g.sources[s];
        if (src.partner < s && c.count(src.partner)) continue;
        const double vp = c.count(src.partner) ? c[src.partner] : 0.0;
        out.pairs.push_back({src.label.l - src.pump, v, vp});
    }
    return out;
}

Form2 form_at(const RingModel& ring, const Combination& comb, double omega, double eta)
{
    Form2 f;
    for (const auto& p : comb.pairs) {
        const Eigen::Matrix4d cov = ring.pair_covariance(p.k, omega, eta);
        const Eigen::Vector2d c(p.c_plus, p.c_minus);
        f.A += c.dot(cov.topLeftCorner<2, 2>() * c);
        f.B += c.dot(cov.topRightCorner<2, 2>() * c);
        f.D += c.dot(cov.bottomRightCorner<2, 2>() * c);
    }
    return f;
}

std::vector<double> omega_grid(const SpectrumGrid& grid, double kappa)
{
    if (grid.points < 2 || grid.span_kappa <= 0) throw std::invalid_argument("bad spectrum grid");
    std::vector<double> w(grid.points);
    const double span = grid.span_kappa * kappa;
    for (int i = 0; i < grid.points; ++i) w[i] = -span + 2 * span * i / (grid.points - 1);
    return w;
}

}  // namespace

double SqueezingSpectrum::max_squeezing_db() const
{
    if (squeezed_db.empty()) return 0.0;
    return -*std::min_element(squeezed_db.begin(), squeezed_db.end());
}

double SqueezingSpectrum::antisqueezing_at_max_db() const
{
    if (squeezed_db.empty()) return 0.0;
    const auto i = std::min_element(squeezed_db.begin(), squeezed_db.end()) - squeezed_db.begin();
    return antisqueezed_db[i];
}

SqueezingSpectrum nullifier_spectrum_eta(int dimension, const QuantumRingConfig& cfg, double eta, long l,
                                         const SpectrumGrid& grid)
{
    const RingModel ring(cfg);
    const Combination comb = target_combination(dimension, l);
    SqueezingSpectrum s;
    s.omega = omega_grid(grid, ring.kappa());
    for (double w : s.omega) {
        const auto e = extremes(form_at(ring, comb, w, eta));
        s.squeezed_db.push_back(10 * std::log10(e.lo / comb.vacuum));
        s.antisqueezed_db.push_back(10 * std::log10(e.hi / comb.vacuum));
        s.theta_opt.push_back(e.theta);
    }
    return s;
}

SqueezingSpectrum nullifier_spectrum(int dimension, const QuantumRingConfig& cfg, const LossBudget& loss, long l,
                                     const SpectrumGrid& grid)
{
    return nullifier_spectrum_eta(dimension, cfg, loss.eta(dimension), l, grid);
}

const std::vector<Geometry>& table_geometries()
{
    static const std::vector<Geometry> rows{
        {0.81e-6, 2.7e-6, 6.834e-9, -0.133e-26, 0.335e-39},
        {0.79e-6, 2.7e-6, 6.837e-9, -0.988e-26, -1.090e-39},
        {0.79e-6, 2.4e-6, 6.850e-9, -2.359e-26, -0.383e-39},
        {0.83e-6, 2.1e-6, 6.865e-9, -13.27e-26, 1.226e-39},
    };
    return rows;
}

QuantumRingConfig config_for_geometry(const QuantumRingConfig& base, const Geometry& g, double fsr_hz)
{
    if (g.beta1 <= 0 || fsr_hz <= 0) throw std::invalid_argument("geometry: beta1 and FSR must be positive");
    QuantumRingConfig c = base;
    // pump coupling stays at the calibrated value; only dispersion and length change
    if (c.g0 <= 0) c.g0 = RingModel(base).g0();
    c.cavity.H = g.H;
    c.cavity.W = g.W;
    c.cavity.L = 1.0 / (g.beta1 * fsr_hz);
    c.profile.beta = {};
    c.profile.beta[0] = g.beta1;
    c.profile.beta[1] = g.beta2;
    c.profile.beta[2] = g.beta3;
    c.profile.ng = g.beta1 * phys::c;
    c.zeta.clear();
    return c;
}

double pair_max_squeezing_db(const RingModel& ring, long l, const SpectrumGrid& grid)
{
    const Combination comb{{{l, 1.0, -1.0}}, 1.0};
    double best = 0.0;
    for (double w : omega_grid(grid, ring.kappa()))
        best = std::max(best, -10 * std::log10(extremes(form_at(ring, comb, w, 1.0)).lo / comb.vacuum));
    return best;
}

long l3db(const QuantumRingConfig& cfg, const SpectrumGrid& grid, long l_cap, int threads)
{
    if (l_cap < 1) throw std::invalid_argument("l3db: l_cap must be >= 1");
    const RingModel ring(cfg);
    const int nt = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<long>> jobs;
    for (int w = 0; w < nt; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            long best = 0;
            for (long l = 1 + 2L * w; l <= l_cap; l += 2L * nt)
                if (pair_max_squeezing_db(ring, l, grid) >= 3.0) best = std::max(best, l);
            return best;
        }));
    long best = 0;
    for (auto& j : jobs) best = std::max(best, j.get());
    return best;
}

}  // namespace cvchip
