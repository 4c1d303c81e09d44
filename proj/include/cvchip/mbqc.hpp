#pragma once

#include "cvchip/cluster.hpp"
#include "cvchip/gaussian.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cvchip {

// 2x2 (q,p) gates used by the compiler
Mat2 R2(double theta);
Mat2 V2(double theta1, double theta2);

// ---- teleportation ------------------------------------------------------

// D[(-i e^{i th2} m1 - i e^{i th1} m2) / sin(th1 - th2)] V(th1, th2)
SymplecticGate teleport(double theta1, double theta2, double m1 = 0.0, double m2 = 0.0);
// finite-squeezing circuit: input on j, two-mode cluster on (k, out), B_jk, p(th1) on j, p(th2) on k
GaussianState teleport_simulated(double theta1, double theta2, double m1, double m2, double r,
                                 const GaussianState& input);

struct StepGates {
    Mat2 alpha, gamma;
};
// V(+-pi/4, -+pi/4) V(th_a, th_b) on both alpha and gamma, region = +1 or -1
StepGates single_mode_step(double theta_a, double theta_b, int region);

struct TwoStepSolution {
    std::array<double, 4> theta;  // (a1, b1, a2, b2)
    int region;
    double residual;
};
// two rounds of the single-mode pattern giving R(phi)
TwoStepSolution solve_rotation(double phi, int region, std::uint64_t seed = 1);

// ---- measurement identities ----------------------------------------------

struct FactorizationReport {
    int samples = 0;
    double bjk = 0;       // equal angles after B_jk, n = B^T m
    double foursplitter = 0;  // all four equal after A^dag, n = A m
    double partial = 0;   // th_a = th_c, th_b = th_d, (alpha beta | gamma delta)
    double control = 0;   // unequal angles, must NOT factorize
};
FactorizationReport measurement_factorization_check(int samples = 200, std::uint64_t seed = 7);

struct PermutedMeasurement {
    Eigen::Matrix4d M;  // signed permutation A P A^T
    std::array<double, 4> angles;
    double deviation;  // direct conjugation check
};
PermutedMeasurement permute_measurement(const std::array<int, 4>& perm, const std::array<double, 4>& angles);

struct GymnasticsReport {
    double core = 0;      // 10-mode operator identity
    double insert = 0;    // extra BSG before equal-basis measurement
    double exchange = 0;  // core identity on the pairs state
    double partner = 0;   // pair transpose move
    std::vector<std::string> mode_list;
};
// mode lists from the two macronode-pair configurations, 0 and 1
GymnasticsReport gymnastics_check(int configuration = 0, double r = 1.0);

// ---- W / G / C_Z ---------------------------------------------------------

// logical order (D, A, B, C)
struct WAngles {
    std::array<double, 4> Ra, Rb;  // per red macronode D, A, B, C
    std::array<double, 4> I;       // grey macronode arms a..d
};
SymplecticGate entangle_W(const WAngles& th, int region);
// G^{s}(t1..t6) on modes (j, k) of n
SymplecticGate g_gate(int j, int k, int n, double s, const std::array<double, 6>& t);

struct WRestriction {
    int which;  // 1..3
    double deviation;
};
// compares W with its factorized form; angles are overwritten to satisfy the restriction
WRestriction check_w_restriction(int which, WAngles th, int region);

struct CzReport {
    double g;
    double deviation;
};
CzReport g_to_cz(double phi, int sign);

// ---- lattice simulation --------------------------------------------------

struct MacronodeId {
    int l = 1, t = 0;
    auto operator<=>(const MacronodeId&) const = default;
};

// slot 0..3 = alpha, beta, gamma, delta
struct DistributedMode {
    MacronodeId node;
    int slot = 0;
    auto operator<=>(const DistributedMode&) const = default;
    std::string str() const;
};

inline bool is_red(const MacronodeId& m) { return class_plus(m.l); }

struct MeasurementPattern {
    std::map<ModeLabel, double> angles;  // physical mode -> theta
    std::map<MacronodeId, int> region;   // grey sign, +-1, stored per grey macronode
    std::vector<DistributedMode> inputs;
    std::vector<DistributedMode> outputs;
};

// distributed-mode view of a 3D cluster graph
class Lattice {
public:
    explicit Lattice(const ClusterGraph& g);

    const ClusterGraph& graph() const { return g_; }
    int modes() const { return g_.modes(); }
    bool has(const DistributedMode& d) const { return dist_.count(d) != 0; }
    int index(const DistributedMode& d) const;  // column of the distributed basis
    const Mat& basis() const { return M_; }     // physical = M distributed
    const Mat& distributed_edges() const { return Ed_; }

    std::vector<DistributedMode> square(const DistributedMode& d) const;
    // next red holder reached from holder d (alpha or gamma) through its resource mode
    DistributedMode next_holder(const DistributedMode& d) const;
    std::vector<MacronodeId> macronodes() const;

private:
    ClusterGraph g_;
    Mat M_, Ed_;
    std::map<DistributedMode, int> dist_;
    std::map<int, DistributedMode> rev_;
};

struct PatternResult {
    GaussianState output;  // outputs conditioned on all-zero outcomes
    Mat gain;              // input means -> output means
};

PatternResult simulate_pattern(const Lattice& lat, const MeasurementPattern& pattern, const GaussianState& input,
                               double r);

// wires of single-mode steps on slot-1 reds with alternating grey signs
struct WirePattern {
    MeasurementPattern pattern;
    SymplecticGate compiled;  // direct sum over wires
    std::vector<int> steps;
};
WirePattern random_wire_pattern(const Lattice& lat, std::mt19937_64& rng, int wires);

// logical wire bookkeeping across steps
class LogicalRegistry {
public:
    int open(const DistributedMode& holder);
    void move(int wire, const DistributedMode& holder);
    const DistributedMode& where(int wire) const;
    const std::vector<DistributedMode>& history(int wire) const;
    int wires() const { return static_cast<int>(hist_.size()); }

private:
    std::vector<std::vector<DistributedMode>> hist_;
    std::map<DistributedMode, int> owner_;
};

struct ConvergenceFit {
    std::vector<double> r, error;
    double slope;
};
ConvergenceFit fit_convergence(const std::vector<double>& r, const std::vector<double>& err);

}  // namespace cvchip
