#pragma once

#include "cvchip/dispersion.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace cvchip {

struct DetuningPoint {
    double time;   // s
    double delta;  // normalized, phase per round trip
};

enum class Ramp {
    linear,  // detuning reaches each point at its time
    step,    // piecewise constant
};

struct LLEParams {
    double t_R = 0.0;
    double alpha = 0.0;
    double theta = 0.0;
    double gamma = 0.0;  // 1/(W m)
    double L = 0.0;
    DispersionProfile beta;
    double E_in = 0.0;  // sqrt(W)
    std::vector<DetuningPoint> detuning_schedule;
    Ramp ramp = Ramp::step;
    int M = 8192;

    void validate() const;
    double detuning_at(double t) const;
};

// t_R = 1/FSR, alpha + theta = w0 t_R / Q_loaded, alpha = w0 t_R / Q_intrinsic
LLEParams lle_params_from_ring(const CavitySpec& cav, const DispersionProfile& p, double gamma,
                               double P_in, std::vector<DetuningPoint> schedule, int M);

// delta = -sigma t_R (sigma = w_pump - w0 in rad/s)
double normalized_detuning(double sigma, double t_R);

// hbar w0 kappa^3 / (8 g0 kappa_o): minimum over detuning of the pump power at
// which the homogeneous state turns unstable
double threshold_power(const CavitySpec& cav, const DispersionProfile& p);

struct FieldState {
    std::vector<std::complex<double>> envelope;
    double slow_time = 0.0;
};

class BlowUp : public std::runtime_error {
public:
    BlowUp(double t);
    double slow_time;
};

class LleSolver {
public:
    explicit LleSolver(LLEParams params);
    ~LleSolver();
    LleSolver(const LleSolver&) = delete;
    LleSolver& operator=(const LleSolver&) = delete;

    const LLEParams& params() const { return p_; }
    // one Strang step: half linear (incl. pump), Kerr, half linear
    FieldState step(FieldState s, double dt);
    void advance(FieldState& s, double dt, double duration);
    FieldState noise_state(std::uint64_t seed) const;
    std::vector<double> line_powers(const FieldState& s) const;  // W per line, FFT order

    double omega(int k) const;  // angular offset of bin k, rad/s

private:
    void linear_half(double dt, double delta);
    void kerr(double dt);

    LLEParams p_;
    struct Fft;
    std::unique_ptr<Fft> fft_;
    std::vector<double> disp_;  // L sum beta_s/s! (-w)^s
    double cached_delta_ = 0.0, cached_h_ = -1.0;
    std::vector<std::complex<double>> lin_;
};

struct CombReport {
    FieldState final_state;
    std::vector<FieldState> snapshots;
    std::vector<double> line_dbc;  // index order -M/2..M/2-1
    int lines_above_60 = 0;
    double stationarity = 0.0;  // max relative change of |E_k| over the final window
    bool stable = false;
    double alias_fraction = 0.0;
    bool aliased = false;
};

struct RunOptions {
    double dt = 0.0;  // 0 -> t_R/10
    double duration = 0.0;
    double window = 10e-9;
    int window_samples = 11;
};

CombReport run(const LLEParams& params, std::uint64_t seed, const RunOptions& opt);

}  // namespace cvchip
