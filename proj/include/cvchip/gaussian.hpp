#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace cvchip {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// a = (q + i p)/sqrt2, vacuum variance 1/2, vectors ordered (q_1..q_N, p_1..p_N)
Mat symplectic_form(int n);

// Z = V + iU
struct ComplexGraph {
    Mat V;
    Mat U;
    std::vector<std::string> labels;

    int modes() const { return static_cast<int>(U.rows()); }
    void validate() const;
};

struct GaussianState {
    Vec mean;
    Mat cov;

    int modes() const { return static_cast<int>(mean.size() / 2); }
    static GaussianState vacuum(int n);
    // smallest eigenvalue of cov + (i/2) Omega; >= 0 for physical states
    double uncertainty_margin() const;
};

// Simplified graph calculus. Edges are stored as the signed real matrix E
// (entries +-C in the interior of a lattice), so U = cosh2r + sinh2r E.
class SimplifiedGraph {
public:
    enum class Form { squeezed, cluster };

    SimplifiedGraph(std::vector<std::string> labels, double r);

    int modes() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    double r() const { return r_; }
    double C() const { return C_; }
    Form form() const { return form_; }
    int index_of(const std::string& label) const;

    void add_edge(int i, int j, double w);
    double weight(int i, int j) const;
    const std::map<int, double>& row(int i) const { return adj_[i]; }
    int edge_count() const;
    Mat edge_matrix() const;

    std::complex<double> self_loop() const;
    double edge_magnitude() const;

    // x' = (x - y)/sqrt2, y' = (x + y)/sqrt2 on modes (j,k); E -> B E B^T
    void beamsplitter(int j, int k);
    // general real splitter, rho = power transmission (rho = 1 is a no-op)
    void splitter(int j, int k, double rho);
    void set_C(double c) { C_ = c; }
    void set_r(double r);
    void set_form(Form f) { form_ = f; }

    ComplexGraph expand() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::map<int, double>> adj_;
    double r_;
    double C_ = 1.0;
    Form form_ = Form::squeezed;
};

SimplifiedGraph tmss_graph(double r);
SimplifiedGraph apply_beamsplitter_graph(SimplifiedGraph g, int j, int k);
SimplifiedGraph to_cluster_state(SimplifiedGraph g);

GaussianState graph_to_covariance(const ComplexGraph& z);

struct SymplecticGate {
    Mat S;
    Vec d;

    int modes() const { return static_cast<int>(S.rows() / 2); }
    static SymplecticGate identity(int n);
    // operator product U1 U2: S = S1 S2, d = S1 d2 + d1
    SymplecticGate operator*(const SymplecticGate& rhs) const;
    GaussianState apply(const GaussianState& s) const;
    double symplectic_error() const;
};

SymplecticGate passive(const CMat& u);
SymplecticGate embed(const SymplecticGate& g, const std::vector<int>& modes, int n);
SymplecticGate direct_sum(const std::vector<SymplecticGate>& gates);

SymplecticGate bsg_matrix(int j, int k, int n);
SymplecticGate foursplitter_matrix(int j, int k, int l, int m, int n);
CMat foursplitter_annihilation();
SymplecticGate rotation(double theta);
SymplecticGate squeezer(double s);
SymplecticGate displacement(cplx alpha);
SymplecticGate v_gate(double theta1, double theta2);
SymplecticGate cz_gate(double g);

// measured quadrature p(theta) = cos(theta) p + sin(theta) q
Vec homodyne_row(int n, int mode, double theta);
GaussianState homodyne_condition(const GaussianState& s, int mode, double theta, double outcome);
// joint conditioning on rows of C, modes kept in place
GaussianState condition_rows(const GaussianState& s, const Mat& C, const Vec& outcomes);
GaussianState remove_modes(const GaussianState& s, std::vector<int> modes);

double nullifier_variance(const GaussianState& s, const Vec& coeffs);

}  // namespace cvchip
