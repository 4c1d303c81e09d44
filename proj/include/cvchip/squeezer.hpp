#pragma once

#include "cvchip/dispersion.hpp"
#include "cvchip/gaussian.hpp"

#include <complex>
#include <string>
#include <vector>

namespace cvchip {

enum class PumpModel {
    resonance_locked,  // |A0|^2 = 4 kappa_o P / (hbar w0 kappa^2)
    steady_state,      // lowest root of the single-mode cubic
};

struct QuantumRingConfig {
    CavitySpec cavity;
    DispersionProfile profile;
    double sigma = 0.0;  // pump detuning, rad/s
    double P_in = 0.0;   // W
    double g0 = 0.0;     // 0 -> computed from cavity/profile
    std::vector<double> zeta;  // zeta_2, zeta_3, ...; empty -> closed forms
    PumpModel pump_model = PumpModel::resonance_locked;
    double kappa_i_override = -1.0;  // >= 0 replaces the intrinsic linewidth
};

struct PumpSolution {
    double photons;  // |A0|^2
    std::complex<double> A0;
    int real_roots;
    double residual;  // relative
};

PumpSolution steady_pump_amplitude(const QuantumRingConfig& cfg);

// precomputed linearized ring, cheap per (l, omega)
class RingModel {
public:
    explicit RingModel(const QuantumRingConfig& cfg);

    double kappa() const { return kappa_; }
    double kappa_i() const { return kappa_i_; }
    double kappa_o() const { return kappa_o_; }
    double g0() const { return g0_; }
    double epsilon() const { return eps_; }  // g0 |A0|^2
    double pump_photons() const { return photons_; }
    const std::vector<double>& zeta() const { return zeta_; }

    std::complex<double> J(long l) const;
    Eigen::Matrix2cd M(long l, double omega) const;
    // (q_l, q_-l, p_l, p_-l)
    Eigen::Matrix4d pair_covariance(long l, double omega, double eta) const;

private:
    double omega0_, kappa_, kappa_i_, kappa_o_, g0_, sigma_, photons_, eps_;
    std::vector<double> zeta_;
};

Eigen::Matrix4d pair_output_covariance(const QuantumRingConfig& cfg, long l, double omega, double eta);
Mat attenuate(const Mat& cov, double eta);

struct LossBudget {
    double ibs_insertion_db = 0.28;
    double dl_per_meter_db = 0.1;
    double crossing_db = 0.015;
    double dl_length_m = 1.5127;
    // element counts per optical path, index = dimension
    std::array<double, 4> ibs_count{0, 1, 2, 3};
    std::array<double, 4> dl_count{0, 0, 1, 1};
    std::array<double, 4> crossing_count{0, 0, 0, 50};

    double total_db(int dimension) const;
    double eta(int dimension) const;
};

struct SqueezingSpectrum {
    std::vector<double> omega;  // rad/s
    std::vector<double> squeezed_db;
    std::vector<double> antisqueezed_db;
    std::vector<double> theta_opt;

    double max_squeezing_db() const;  // positive number
    double antisqueezing_at_max_db() const;
};

struct SpectrumGrid {
    int points = 2001;
    double span_kappa = 5.0;  // +- span * kappa
};

SqueezingSpectrum nullifier_spectrum(int dimension, const QuantumRingConfig& cfg, const LossBudget& loss,
                                     long l = 1, const SpectrumGrid& grid = {});
// same with an explicit transmissivity
SqueezingSpectrum nullifier_spectrum_eta(int dimension, const QuantumRingConfig& cfg, double eta, long l,
                                         const SpectrumGrid& grid = {});

struct Geometry {
    double H, W;  // m
    double beta1, beta2, beta3;
};

const std::vector<Geometry>& table_geometries();
QuantumRingConfig config_for_geometry(const QuantumRingConfig& base, const Geometry& g, double fsr_hz);
double pair_max_squeezing_db(const RingModel& ring, long l, const SpectrumGrid& grid);
long l3db(const QuantumRingConfig& cfg, const SpectrumGrid& grid = {}, long l_cap = 4001, int threads = 0);

}  // namespace cvchip
