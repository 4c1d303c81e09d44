#include "cvchip/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvchip {

GaussianState GaussianState::vacuum(int n)
{
    return {Vec::Zero(2 * n), 0.5 * Mat::Identity(2 * n, 2 * n)};
}

double GaussianState::uncertainty_margin() const
{
    const int n = modes();
    CMat h = cov.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form(n).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

Vec homodyne_row(int n, int mode, double theta)
{
    Vec c = Vec::Zero(2 * n);
    c(mode) = std::sin(theta);
    c(n + mode) = std::cos(theta);
    return c;
}

GaussianState condition_rows(const GaussianState& s, const Mat& C, const Vec& outcomes)
{
    const Mat k = s.cov * C.transpose();
    const Mat y = C * k;
    // pseudo-inverse, singular values below 1e-12 of the largest dropped
    Eigen::JacobiSVD<Mat> svd(y, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec sv = svd.singularValues();
    const double cut = sv.size() ? 1e-12 * sv(0) : 0.0;
    Vec inv = Vec::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) inv(i) = 1.0 / sv(i);
    const Mat yp = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();

    GaussianState out;
    out.cov = s.cov - k * yp * k.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    out.mean = s.mean + k * yp * (outcomes - C * s.mean);
    return out;
}

GaussianState remove_modes(const GaussianState& s, std::vector<int> modes)
{
    const int n = s.modes();
    std::sort(modes.begin(), modes.end());
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (!std::binary_search(modes.begin(), modes.end(), i)) keep.push_back(i);
    const int m = static_cast<int>(keep.size());
    std::vector<int> idx(2 * m);
    for (int a = 0; a < m; ++a) idx[a] = keep[a], idx[m + a] = n + keep[a];

    GaussianState out{Vec(2 * m), Mat(2 * m, 2 * m)};
    for (int a = 0; a < 2 * m; ++a) {
        out.mean(a) = s.mean(idx[a]);
        for (int b = 0; b < 2 * m; ++b) out.cov(a, b) = s.cov(idx[a], idx[b]);
    }
    return out;
}

GaussianState homodyne_condition(const GaussianState& s, int mode, double theta, double outcome)
{
    const int n = s.modes();
    if (mode < 0 || mode >= n) throw std::out_of_range("homodyne_condition: mode not in state");
    const Mat c = homodyne_row(n, mode, theta).transpose();
    Vec m(1);
    m << outcome;
    return remove_modes(condition_rows(s, c, m), {mode});
}

double nullifier_variance(const GaussianState& s, const Vec& coeffs)
{
    if (coeffs.size() != s.cov.rows())
        throw std::invalid_argument("nullifier_variance: coefficient length must be 2N");
    return coeffs.dot(s.cov * coeffs);
}

}  // namespace cvchip
