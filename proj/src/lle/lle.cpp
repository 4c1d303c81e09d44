#include "cvchip/lle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <mutex>
#include <random>
#include <string>

namespace cvchip {

using std::numbers::pi;
using cd = std::complex<double>;

void LLEParams::validate() const
{
    if (t_R <= 0) throw std::invalid_argument("lle: t_R must be positive");
    if (alpha < 0 || theta < 0) throw std::invalid_argument("lle: alpha, theta must be >= 0");
    if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("lle: M must be a power of two");
    for (std::size_t i = 1; i < detuning_schedule.size(); ++i)
        if (detuning_schedule[i].time <= detuning_schedule[i - 1].time)
            throw std::invalid_argument("lle: detuning schedule times must increase");
}

double LLEParams::detuning_at(double t) const
{
    const auto& s = detuning_schedule;
    if (s.empty()) return 0.0;
    if (t <= s.front().time) return s.front().delta;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (t >= s[i].time) continue;
        if (ramp == Ramp::step) return s[i - 1].delta;
        const double f = (t - s[i - 1].time) / (s[i].time - s[i - 1].time);
        return s[i - 1].delta + f * (s[i].delta - s[i - 1].delta);
    }
    return s.back().delta;
}

LLEParams lle_params_from_ring(const CavitySpec& cav, const DispersionProfile& p, double gamma,
                               double P_in, std::vector<DetuningPoint> schedule, int M)
{
    cav.validate();
    LLEParams q;
    q.t_R = 1.0 / fsr(p.ng, cav.L);
    const double w0 = p.omega0();
    const double total = w0 * q.t_R / cav.Q_loaded;
    q.alpha = w0 * q.t_R / cav.Q_intrinsic;
    q.theta = total - q.alpha;
    q.gamma = gamma;
    q.L = cav.L;
    q.beta = p;
    q.E_in = std::sqrt(P_in);
    q.detuning_schedule = std::move(schedule);
    q.M = M;
    return q;
}

double normalized_detuning(double sigma, double t_R) { return -sigma * t_R; }

double threshold_power(const CavitySpec& cav, const DispersionProfile& p)
{
    const double w0 = p.omega0();
    const auto lw = linewidths(cav, w0);
    return phys::hbar * w0 * std::pow(lw.kappa, 3) / (8 * g0(cav, p) * lw.kappa_o);
}

BlowUp::BlowUp(double t)
    : std::runtime_error("blow-up: non-finite field at slow time " + std::to_string(t) + " s"),
      slow_time(t)
{
}

namespace {
// the FFTW planner is not thread-safe
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
}  // namespace

struct LleSolver::Fft {
    int n;
    fftw_complex* buf;
    fftw_plan fwd, bwd;
    explicit Fft(int m) : n(m)
    {
        std::lock_guard lock(planner_mutex());
        buf = fftw_alloc_complex(static_cast<std::size_t>(m));
        fwd = fftw_plan_dft_1d(m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;
    cd* data() { return reinterpret_cast<cd*>(buf); }
};

LleSolver::LleSolver(LLEParams params) : p_(std::move(params))
{
    p_.validate();
    fft_ = std::make_unique<Fft>(p_.M);
    disp_.resize(p_.M);
    for (int k = 0; k < p_.M; ++k) {
        // E(tau) = sum_k E_k exp(+i w_k tau), so (i d/dtau)^s -> (-w_k)^s
        const double w = -omega(k);
        double v = 0, wp = w, fact = 1;
        for (int s = 2; s <= 8; ++s) {
            wp *= w;
            fact *= s;
            v += p_.beta.beta_s(s) * wp / fact;
        }
        disp_[k] = p_.L * v;
    }
    lin_.resize(p_.M);
}

LleSolver::~LleSolver() = default;

double LleSolver::omega(int k) const
{
    const int kk = k < p_.M / 2 ? k : k - p_.M;
    return 2 * pi * kk / p_.t_R;
}

void LleSolver::linear_half(double h, double delta)
{
    if (delta != cached_delta_ || h != cached_h_) {
        const double loss = -0.5 * (p_.alpha + p_.theta);
        for (int k = 0; k < p_.M; ++k)
            lin_[k] = std::exp(cd(loss, disp_[k] - delta) * (h / p_.t_R));
        cached_delta_ = delta;
        cached_h_ = h;
    }
    cd* e = fft_->data();
    fftw_execute(fft_->fwd);
    const cd e0 = e[0];
    for (int k = 0; k < p_.M; ++k) e[k] *= lin_[k];
    // pump drives bin 0; integrated exactly with the linear part
    const cd lam0 = cd(-0.5 * (p_.alpha + p_.theta), -delta) / p_.t_R;
    const cd drive = static_cast<double>(p_.M) * std::sqrt(p_.theta) * p_.E_in / p_.t_R;
    if (std::abs(lam0) > 0)
        e[0] = lin_[0] * e0 + (lin_[0] - 1.0) / lam0 * drive;
    else
        e[0] = e0 + drive * h;
    fftw_execute(fft_->bwd);
    const double inv = 1.0 / p_.M;
    for (int k = 0; k < p_.M; ++k) e[k] *= inv;
}

void LleSolver::kerr(double dt)
{
    cd* e = fft_->data();
    const double g = p_.gamma * p_.L * dt / p_.t_R;
    for (int k = 0; k < p_.M; ++k) e[k] *= std::polar(1.0, g * std::norm(e[k]));
}

void LleSolver::advance(FieldState& s, double dt, double duration)
{
    if (dt <= 0) throw std::invalid_argument("lle: dt must be positive");
    if (static_cast<int>(s.envelope.size()) != p_.M) throw std::invalid_argument("lle: grid size mismatch");
    cd* e = fft_->data();
    std::copy(s.envelope.begin(), s.envelope.end(), e);
    const long steps = std::lround(duration / dt);
    for (long n = 0; n < steps; ++n) {
        // detuning sampled at the step midpoint
        const double delta = p_.detuning_at(s.slow_time + 0.5 * dt);
        linear_half(0.5 * dt, delta);
        kerr(dt);
        linear_half(0.5 * dt, delta);
        s.slow_time += dt;
        if ((n & 255) == 255 || n + 1 == steps) {
            for (int k = 0; k < p_.M; ++k)
                if (!std::isfinite(e[k].real()) || !std::isfinite(e[k].imag())) throw BlowUp(s.slow_time);
        }
    }
    std::copy(e, e + p_.M, s.envelope.begin());
}

FieldState LleSolver::step(FieldState s, double dt)
{
    advance(s, dt, dt);
    return s;
}

FieldState LleSolver::noise_state(std::uint64_t seed) const
{
    // half a photon per cavity mode, as circulating power hbar w0 / (2 t_R)
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double amp = std::sqrt(phys::hbar * p_.beta.omega0() / (2 * p_.t_R) / 2);
    std::vector<cd> spec(p_.M);
    for (auto& v : spec) v = amp * cd(nd(rng), nd(rng));
    FieldState s;
    s.envelope.assign(p_.M, cd{});
    // inverse transform of the mode amplitudes (E_n = sum_k e_k exp(2 pi i k n / M))
    Fft f(p_.M);
    std::copy(spec.begin(), spec.end(), f.data());
    fftw_execute(f.bwd);
    std::copy(f.data(), f.data() + p_.M, s.envelope.begin());
    return s;
}

std::vector<double> LleSolver::line_powers(const FieldState& s) const
{
    Fft f(p_.M);
    std::copy(s.envelope.begin(), s.envelope.end(), f.data());
    fftw_execute(f.fwd);
    std::vector<double> pw(p_.M);
    const double inv = 1.0 / p_.M;
    for (int k = 0; k < p_.M; ++k) pw[k] = std::norm(f.data()[k] * inv);
    return pw;
}

CombReport run(const LLEParams& params, std::uint64_t seed, const RunOptions& opt)
{
    LleSolver solver(params);
    const double dt = opt.dt > 0 ? opt.dt : params.t_R / 10;
    double duration = opt.duration;
    for (const auto& pt : params.detuning_schedule) duration = std::max(duration, pt.time);
    if (duration <= 0) throw std::invalid_argument("run: duration must cover the schedule");

    CombReport rep;
    FieldState s = solver.noise_state(seed);
    const double t_window = std::max(0.0, duration - opt.window);
    solver.advance(s, dt, t_window);

    const int ns = std::max(2, opt.window_samples);
    const double chunk = (duration - t_window) / (ns - 1);
    std::vector<std::vector<double>> mags;
    for (int i = 0; i < ns; ++i) {
        if (i > 0) solver.advance(s, dt, chunk);
        rep.snapshots.push_back(s);
        auto pw = solver.line_powers(s);
        for (auto& v : pw) v = std::sqrt(v);
        mags.push_back(std::move(pw));
    }
    rep.final_state = s;

    // |E_k| is insensitive to the drift of the pulse in fast time
    const auto& last = mags.back();
    double ref = 0;
    for (double v : last) ref += v * v;
    ref = std::sqrt(ref);
    for (const auto& m : mags) {
        double d = 0;
        for (std::size_t k = 0; k < m.size(); ++k) d += (m[k] - last[k]) * (m[k] - last[k]);
        rep.stationarity = std::max(rep.stationarity, std::sqrt(d) / ref);
    }

    const int M = params.M;
    const auto pw = solver.line_powers(s);
    const double p0 = pw[0];
    rep.line_dbc.resize(M);
    double total = 0, top = 0;
    for (int i = 0; i < M; ++i) {
        const int k = i - M / 2;
        const int bin = k < 0 ? k + M : k;
        rep.line_dbc[i] = 10 * std::log10(std::max(pw[bin], 1e-300) / p0);
        if (k != 0 && rep.line_dbc[i] > -60) ++rep.lines_above_60;
        total += pw[bin];
        if (std::abs(k) > 3 * M / 8) top += pw[bin];
    }
    rep.alias_fraction = top / total;
    rep.aliased = rep.alias_fraction >= 1e-6;
    rep.stable = rep.stationarity < 0.01 && !rep.aliased;
    return rep;
}

}  // namespace cvchip
