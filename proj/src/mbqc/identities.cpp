#include "cvchip/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cvchip {

using std::numbers::pi;

namespace {

CMat random_unitary(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CMat z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<CMat> qr(z);
    return qr.householderQ() * CMat::Identity(n, n);
}

// thermal state through passive-squeeze-passive, random mean
GaussianState random_state(int n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-0.6, 0.6), nu(0.5, 1.5);
    std::normal_distribution<double> g;
    SymplecticGate sq = SymplecticGate::identity(n);
    for (int m = 0; m < n; ++m) {
        const double e = std::exp(u(rng));
        sq.S(m, m) = e, sq.S(n + m, n + m) = 1 / e;
    }
    const SymplecticGate s = passive(random_unitary(n, rng)) * sq * passive(random_unitary(n, rng));
    GaussianState st = GaussianState::vacuum(n);
    for (int m = 0; m < n; ++m) st.cov(m, m) = st.cov(n + m, n + m) = nu(rng);
    for (int i = 0; i < 2 * n; ++i) st.mean(i) = g(rng);
    return s.apply(st);
}

Mat rows_for(int n, const std::vector<int>& modes, const std::vector<double>& theta)
{
    Mat c(modes.size(), 2 * n);
    for (std::size_t i = 0; i < modes.size(); ++i) c.row(i) = homodyne_row(n, modes[i], theta[i]).transpose();
    return c;
}

double state_gap(const GaussianState& a, const GaussianState& b)
{
    return std::max((a.mean - b.mean).cwiseAbs().maxCoeff(), (a.cov - b.cov).cwiseAbs().maxCoeff());
}

// measure `modes` after `mix` with outcomes m, versus no mix with outcomes relabel * m
double factorization_gap(const GaussianState& s, const SymplecticGate& mix, const SymplecticGate& rest,
                         const std::vector<int>& modes, const std::vector<double>& theta, const Vec& m,
                         const Mat& relabel)
{
    const Mat c = rows_for(s.modes(), modes, theta);
    const auto a = remove_modes(condition_rows(mix.apply(s), c, m), modes);
    const auto b = remove_modes(condition_rows(rest.apply(s), c, relabel * m), modes);
    return state_gap(a, b);
}

Mat real_block(const CMat& u) { return u.real(); }

}  // namespace

FactorizationReport measurement_factorization_check(int samples, std::uint64_t seed)
{
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, pi), off(0.3, 1.2);
    std::normal_distribution<double> g;
    auto outcomes = [&](int k) {
        Vec m(k);
        for (int i = 0; i < k; ++i) m(i) = g(rng);
        return m;
    };

    CMat b2(2, 2);
    b2 << 1.0, -1.0, 1.0, 1.0;
    b2 /= std::sqrt(2.0);
    const CMat am = foursplitter_annihilation();
    // A = X Y, X = B01 B23, Y = B02 B13; X and Y commute
    const SymplecticGate X = bsg_matrix(0, 1, 6) * bsg_matrix(2, 3, 6);
    CMat y4 = CMat::Identity(4, 4);
    {
        CMat b02 = CMat::Identity(4, 4), b13 = CMat::Identity(4, 4);
        b02(0, 0) = b2(0, 0), b02(0, 2) = b2(0, 1), b02(2, 0) = b2(1, 0), b02(2, 2) = b2(1, 1);
        b13(1, 1) = b2(0, 0), b13(1, 3) = b2(0, 1), b13(3, 1) = b2(1, 0), b13(3, 3) = b2(1, 1);
        y4 = b02 * b13;
    }
    const SymplecticGate a_dag = embed(passive(am.adjoint()), {0, 1, 2, 3}, 6);
    const SymplecticGate x_dag{X.S.transpose(), Vec::Zero(12)};

    FactorizationReport rep;
    rep.samples = samples;
    rep.control = 1e300;
    for (int k = 0; k < samples; ++k) {
        const GaussianState s4 = random_state(4, rng);
        const double t = ang(rng);
        rep.bjk = std::max(rep.bjk, factorization_gap(s4, bsg_matrix(0, 1, 4), SymplecticGate::identity(4), {0, 1},
                                                      {t, t}, outcomes(2), real_block(b2).transpose()));
        const double t2 = t + off(rng);
        rep.control = std::min(rep.control, factorization_gap(s4, bsg_matrix(0, 1, 4), SymplecticGate::identity(4),
                                                              {0, 1}, {t, t2}, outcomes(2), real_block(b2).transpose()));

        const GaussianState s6 = random_state(6, rng);
        const double u = ang(rng), v = ang(rng);
        rep.foursplitter = std::max(rep.foursplitter,
                                    factorization_gap(s6, a_dag, SymplecticGate::identity(6), {0, 1, 2, 3},
                                                      {u, u, u, u}, outcomes(4), real_block(am)));
        // the Y^dag half acts last and sees equal angles on (0,2) and (1,3)
        rep.partial = std::max(rep.partial, factorization_gap(s6, a_dag, x_dag, {0, 1, 2, 3}, {u, v, u, v},
                                                              outcomes(4), real_block(y4)));
    }
    return rep;
}

PermutedMeasurement permute_measurement(const std::array<int, 4>& perm, const std::array<double, 4>& angles)
{
    {
        auto p = perm;
        std::sort(p.begin(), p.end());
        if (p != std::array<int, 4>{0, 1, 2, 3}) throw std::invalid_argument("not a permutation of 0..3");
    }
    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    for (int j = 0; j < 4; ++j) P(j, perm[j]) = 1.0;
    const Eigen::Matrix4d am = foursplitter_annihilation().real();
    Eigen::Matrix4d q = am * P * am.transpose();
    for (int i = 0; i < 16; ++i) q.data()[i] = std::round(q.data()[i] * 1e12) / 1e12;

    PermutedMeasurement out{q, {}, 0.0};
    for (int j = 0; j < 4; ++j) {
        int hits = 0;
        for (int i = 0; i < 4; ++i)
            if (std::abs(q(j, i)) > 0.5) out.angles[i] = angles[j], ++hits;
        if (hits != 1) throw std::logic_error("permute_measurement: A P A^T is not a signed permutation");
    }
    // C_theta (Q + Q) = Q C_theta'
    const std::vector<int> m{0, 1, 2, 3};
    const Mat lhs = rows_for(4, m, {angles.begin(), angles.end()}) * passive(CMat(q.cast<cplx>())).S;
    const Mat rhs = q * rows_for(4, m, {out.angles.begin(), out.angles.end()});
    out.deviation = (lhs - rhs).cwiseAbs().maxCoeff();
    return out;
}

GymnasticsReport gymnastics_check(int configuration, double r)
{
    static const std::vector<std::string> lists[2] = {
        {"D.g", "D.d", "A.g", "A.d", "M.b", "I.a", "I.b", "E.a", "Q.g", "N.g"},
        // printed list repeats C.a at 10
        {"B.a", "B.b", "C.a", "C.b", "G.d", "I.g", "I.d", "K.g", "O.a", "C.a(10)"},
    };
    if (configuration < 0 || configuration > 1) throw std::invalid_argument("configuration must be 0 or 1");
    constexpr int n = 10;
    auto B = [](int j, int k) { return bsg_matrix(j - 1, k - 1, n); };  // 1-indexed as in the mode list

    GymnasticsReport rep;
    rep.mode_list = lists[configuration];
    const SymplecticGate lhs = B(5, 8) * B(6, 7) * B(6, 5) * B(8, 7);
    const SymplecticGate rhs = B(6, 5) * B(8, 7) * B(6, 8) * B(7, 5);
    rep.core = (lhs.S - rhs.S).norm();

    // entangled pairs (1,5) (2,6) (3,7) (4,8) (9,10); the square-forming BSGs act first
    SimplifiedGraph pairs(rep.mode_list, r);
    for (auto [a, b] : {std::pair{1, 5}, {2, 6}, {3, 7}, {4, 8}, {9, 10}}) pairs.add_edge(a - 1, b - 1, -1.0);
    const GaussianState base = graph_to_covariance(pairs.expand());
    const SymplecticGate squares = B(1, 2) * B(3, 4);
    const GaussianState sq = squares.apply(base);

    // (b) equal-basis measurement of 5 and 8 absorbs an extra B_58
    {
        const GaussianState s = B(6, 7).apply(sq);
        const double th = 0.4;
        Mat c(2, 2 * n);
        c.row(0) = homodyne_row(n, 4, th).transpose();
        c.row(1) = homodyne_row(n, 7, th).transpose();
        Vec m(2);
        m << 0.3, -0.8;
        Mat b2(2, 2);
        b2 << 1, -1, 1, 1;
        b2 /= std::sqrt(2.0);
        const auto a = remove_modes(condition_rows(B(5, 8).apply(s), c, m), {4, 7});
        const auto b = remove_modes(condition_rows(s, c, b2.transpose() * m), {4, 7});
        rep.insert = state_gap(a, b);
    }
    // (d) the exchanged order on the state
    rep.exchange = state_gap(lhs.apply(sq), rhs.apply(sq));
    // (e) B_75 on members equals B_13 on the partners
    rep.partner = state_gap((B(7, 5) * squares).apply(base), (squares * B(1, 3)).apply(base));
    return rep;
}

}  // namespace cvchip
