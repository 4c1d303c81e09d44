#include "cvchip/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace cvchip {

namespace {
constexpr double kDrop = 1e-14;
}

Mat symplectic_form(int n)
{
    Mat om = Mat::Zero(2 * n, 2 * n);
    om.topRightCorner(n, n) = Mat::Identity(n, n);
    om.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return om;
}

void ComplexGraph::validate() const
{
    const auto n = U.rows();
    if (U.cols() != n || V.rows() != n || V.cols() != n)
        throw std::invalid_argument("ComplexGraph: V and U must be square and equal size");
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n)
        throw std::invalid_argument("ComplexGraph: label count does not match mode count");
    if ((U - U.transpose()).norm() > 1e-12 * (1.0 + U.norm()) ||
        (V - V.transpose()).norm() > 1e-12 * (1.0 + V.norm()))
        throw std::invalid_argument("ComplexGraph: V and U must be symmetric");
}

SimplifiedGraph::SimplifiedGraph(std::vector<std::string> labels, double r)
    : labels_(std::move(labels)), adj_(labels_.size()), r_(r)
{
    if (r < 0) throw std::invalid_argument("squeezing parameter r must be >= 0");
}

void SimplifiedGraph::set_r(double r)
{
    if (r < 0) throw std::invalid_argument("squeezing parameter r must be >= 0");
    r_ = r;
}

int SimplifiedGraph::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    throw std::out_of_range("unknown mode " + label);
}

void SimplifiedGraph::add_edge(int i, int j, double w)
{
    if (i == j) throw std::invalid_argument("self edges are not allowed");
    double& a = adj_.at(i)[j];
    a += w;
    adj_.at(j)[i] = a;
    if (std::abs(a) < kDrop) {
        adj_[i].erase(j);
        adj_[j].erase(i);
    }
}

double SimplifiedGraph::weight(int i, int j) const
{
    auto it = adj_.at(i).find(j);
    return it == adj_[i].end() ? 0.0 : it->second;
}

int SimplifiedGraph::edge_count() const
{
    std::size_t twice = 0;
    for (const auto& r : adj_) twice += r.size();
    return static_cast<int>(twice / 2);
}

Mat SimplifiedGraph::edge_matrix() const
{
    const int n = modes();
    Mat e = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (auto [j, w] : adj_[i]) e(i, j) = w;
    return e;
}

std::complex<double> SimplifiedGraph::self_loop() const
{
    if (form_ == Form::cluster) return {0.0, 1.0 / std::cosh(2 * r_)};
    return {0.0, std::cosh(2 * r_)};
}

double SimplifiedGraph::edge_magnitude() const
{
    if (form_ == Form::cluster) return C_ * std::tanh(2 * r_);
    return C_ * std::sinh(2 * r_);
}

void SimplifiedGraph::beamsplitter(int j, int k)
{
    splitter(j, k, 0.5);
    C_ /= std::sqrt(2.0);
}

void SimplifiedGraph::splitter(int j, int k, double rho)
{
    if (j == k) throw std::invalid_argument("beamsplitter needs two distinct modes");
    if (rho < 0 || rho > 1) throw std::invalid_argument("splitting ratio outside [0,1]");
    if (rho == 1.0) return;
    const double t = std::sqrt(rho);
    const double s = std::sqrt(1.0 - rho);

    // rows of E for j,k; the (j,k) block transforms on both sides
    std::map<int, double> rj = adj_.at(j), rk = adj_.at(k);
    const double jj = rj.count(j) ? rj[j] : 0.0, jk = rj.count(k) ? rj[k] : 0.0;
    const double kk = rk.count(k) ? rk[k] : 0.0;
    rj.erase(j), rj.erase(k), rk.erase(j), rk.erase(k);

    for (auto& [m, w] : rj) adj_[m].erase(j);
    for (auto& [m, w] : rk) adj_[m].erase(k);
    adj_[j].clear();
    adj_[k].clear();

    std::map<int, double> nj, nk;
    for (auto [m, w] : rj) nj[m] += t * w, nk[m] += s * w;
    for (auto [m, w] : rk) nj[m] -= s * w, nk[m] += t * w;
    for (auto [m, w] : nj)
        if (std::abs(w) > kDrop) adj_[j][m] = w, adj_[m][j] = w;
    for (auto [m, w] : nk)
        if (std::abs(w) > kDrop) adj_[k][m] = w, adj_[m][k] = w;

    Mat2 b;
    b << t, -s, s, t;
    Mat2 blk;
    blk << jj, jk, jk, kk;
    const Mat2 nb = b * blk * b.transpose();
    auto put = [&](int x, int y, double w) {
        if (std::abs(w) > kDrop) adj_[x][y] = w;
    };
    put(j, j, nb(0, 0));
    put(k, k, nb(1, 1));
    put(j, k, nb(0, 1));
    put(k, j, nb(1, 0));
}

ComplexGraph SimplifiedGraph::expand() const
{
    const int n = modes();
    const Mat e = edge_matrix();
    ComplexGraph z;
    z.labels = labels_;
    if (form_ == Form::squeezed) {
        z.U = std::cosh(2 * r_) * Mat::Identity(n, n) + std::sinh(2 * r_) * e;
        z.V = Mat::Zero(n, n);
    } else {
        z.U = Mat::Identity(n, n) / std::cosh(2 * r_);
        z.V = std::tanh(2 * r_) * e;
    }
    return z;
}

SimplifiedGraph tmss_graph(double r)
{
    SimplifiedGraph g({"1", "2"}, r);
    g.add_edge(0, 1, -1.0);
    return g;
}

SimplifiedGraph apply_beamsplitter_graph(SimplifiedGraph g, int j, int k)
{
    g.beamsplitter(j, k);
    return g;
}

SimplifiedGraph to_cluster_state(SimplifiedGraph g)
{
    g.set_form(SimplifiedGraph::Form::cluster);
    return g;
}

GaussianState graph_to_covariance(const ComplexGraph& z)
{
    z.validate();
    const int n = z.modes();
    Eigen::LLT<Mat> llt(z.U);
    if (llt.info() != Eigen::Success) throw std::domain_error("degenerate graph");
    const Mat ui = llt.solve(Mat::Identity(n, n));
    // lower-left block V U^-1
    GaussianState s;
    s.mean = Vec::Zero(2 * n);
    s.cov.resize(2 * n, 2 * n);
    s.cov.topLeftCorner(n, n) = ui;
    s.cov.topRightCorner(n, n) = ui * z.V;
    s.cov.bottomLeftCorner(n, n) = z.V * ui;
    s.cov.bottomRightCorner(n, n) = z.U + z.V * ui * z.V;
    s.cov *= 0.5;
    return s;
}

}  // namespace cvchip
