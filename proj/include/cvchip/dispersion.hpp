#pragma once

#include <array>
#include <vector>

namespace cvchip {

namespace phys {
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
}  // namespace phys

struct DispersionProfile {
    std::array<double, 8> beta{};  // beta_1..beta_8, s^k/m
    double lambda0 = 0.0;          // m
    double n0 = 0.0;
    double ng = 0.0;

    double beta_s(int s) const { return beta.at(s - 1); }
    double omega0() const;
    void validate() const;
};

struct CavitySpec {
    double L = 0.0;  // m
    double Q_loaded = 0.0;
    double Q_intrinsic = 0.0;
    double n2 = 0.0;  // m^2/W
    double W = 0.0;   // m
    double H = 0.0;   // m
    double V0 = 0.0;  // m^3, 0 -> W*H*L

    void validate() const;
    double mode_volume() const { return V0 > 0 ? V0 : W * H * L; }
};

struct Linewidths {
    double kappa, kappa_i, kappa_o;  // rad/s
};

Linewidths linewidths(const CavitySpec& cav, double omega0);

struct Zeta23 {
    double z2, z3;
};

Zeta23 zeta_from_beta(const DispersionProfile& p, double L);
// zeta_2..zeta_{order} from root-solving beta(w_l) L = 2 pi l over |l| <= lmax
std::vector<double> zeta_numeric(const DispersionProfile& p, double L, int order, int lmax = 50);

// offset w_l - w0 in rad/s; zeta[0] is zeta_2
double resonance_offset(long l, double dw, const std::vector<double>& zeta);
double resonant_frequency(long l, double omega0, double dw, const std::vector<double>& zeta);

double fsr(double ng, double L);
double g0(const CavitySpec& cav, const DispersionProfile& p);
double gamma_eff(const CavitySpec& cav, const DispersionProfile& p);
double phase_mismatch(long l, double zeta2, double g0, double pump_photons);

}  // namespace cvchip
