#include "cvchip/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace cvchip {

ConfigError::ConfigError(std::string path, const std::string& what)
    : std::runtime_error(path + ": " + what), path_(std::move(path))
{
}

ExperimentConfig default_config()
{
    ExperimentConfig c;

    auto& r = c.ring;
    r.cavity = {15.7e-3, 2e6, 2.22e7, 2.5e-19, 2.1e-6, 0.82e-6, 0.0};
    r.profile.lambda0 = 1549.6e-9;
    r.profile.n0 = 1.85;
    r.profile.ng = 2.05;
    r.profile.beta = {2.05 / phys::c, -1.986e-25, 2.546e-39, 3.318e-52,
                      -1.625e-65, -3.863e-79, -4.000e-92, -7.916e-106};

    c.lle.schedule = {{0.0, 0.0}, {25e-9, 0.21}, {50e-9, 0.42}, {75e-9, 0.75}};

    auto& q = c.quantum.ring;
    q.profile.lambda0 = 1549.6e-9;
    q.profile.n0 = 1.85;
    q.profile.beta[0] = 6.834e-9;
    q.profile.beta[1] = -0.133e-26;
    q.profile.beta[2] = 0.335e-39;
    q.profile.ng = q.profile.beta[0] * phys::c;
    q.cavity = {1.0 / (6.834e-9 * 9.32e9), 2e6, 2.22e7, 2.5e-19, 2.7e-6, 0.81e-6, 0.0};
    q.sigma = -2 * std::numbers::pi * 82e6;
    q.P_in = 55.63e-3;

    c.chip = preset("full_3d");
    c.preset = "full_3d";
    return c;
}

namespace {

// walks a json object, remembering the key path for errors
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }
    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    // call after all reads
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }

    const json* find(const std::string& k)
    {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    void num(const std::string& k, double& v, bool positive = false)
    {
        if (auto p = find(k)) {
            if (!p->is_number()) throw ConfigError(key(k), "expected a number");
            v = p->get<double>();
            if (!std::isfinite(v)) throw ConfigError(key(k), "not finite");
        }
        if (positive && !(v > 0)) throw ConfigError(key(k), "must be positive");
    }

    template <class I>
    void integer(const std::string& k, I& v, long lo)
    {
        if (auto p = find(k)) {
            if (!p->is_number_integer()) throw ConfigError(key(k), "expected an integer");
            v = p->get<I>();
        }
        if (static_cast<long>(v) < lo) throw ConfigError(key(k), "must be >= " + std::to_string(lo));
    }

    void str(const std::string& k, std::string& v)
    {
        if (auto p = find(k)) {
            if (!p->is_string()) throw ConfigError(key(k), "expected a string");
            v = p->get<std::string>();
        }
    }

    template <std::size_t N>
    void array(const std::string& k, std::array<double, N>& v, std::size_t min_len = 0)
    {
        auto p = find(k);
        if (!p) return;
        if (!p->is_array() || p->size() > N || p->size() < min_len)
            throw ConfigError(key(k), "expected an array of up to " + std::to_string(N) + " numbers");
        v = {};
        for (std::size_t i = 0; i < p->size(); ++i) {
            if (!(*p)[i].is_number()) throw ConfigError(key(k) + "[" + std::to_string(i) + "]", "expected a number");
            v[i] = (*p)[i].get<double>();
        }
    }

    Reader sub(const std::string& k)
    {
        static const json empty = json::object();
        auto p = find(k);
        return Reader(p ? *p : empty, key(k));
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_cavity(Reader& r, CavitySpec& c, DispersionProfile& p, bool derive_length)
{
    r.num("L", c.L, !derive_length);
    r.num("Q_loaded", c.Q_loaded, true);
    r.num("Q_intrinsic", c.Q_intrinsic, true);
    if (c.Q_intrinsic <= c.Q_loaded) throw ConfigError(r.key("Q_intrinsic"), "must exceed Q_loaded");
    r.num("n2", c.n2, true);
    r.num("W", c.W, true);
    r.num("H", c.H, true);
    r.num("V0", c.V0);
    if (c.V0 < 0) throw ConfigError(r.key("V0"), "must be >= 0");
    r.num("lambda0", p.lambda0, true);
    r.num("n0", p.n0, true);
    r.num("ng", p.ng);
    r.array("beta", p.beta, 2);
    if (!(p.beta[0] > 0)) throw ConfigError(r.key("beta") + "[0]", "beta1 must be positive");
}

json cavity_json(const CavitySpec& c, const DispersionProfile& p)
{
    return {{"L", c.L},           {"Q_loaded", c.Q_loaded}, {"Q_intrinsic", c.Q_intrinsic},
            {"n2", c.n2},         {"W", c.W},               {"H", c.H},
            {"V0", c.V0},         {"lambda0", p.lambda0},   {"n0", p.n0},
            {"ng", p.ng},         {"beta", p.beta}};
}

const std::map<std::string, Ramp> ramps{{"step", Ramp::step}, {"linear", Ramp::linear}};
const std::map<std::string, PumpModel> pumps{{"resonance_locked", PumpModel::resonance_locked},
                                             {"steady_state", PumpModel::steady_state}};

template <class E>
std::string name_of(const std::map<std::string, E>& m, E v)
{
    for (auto& [k, e] : m)
        if (e == v) return k;
    return "?";
}

}  // namespace

ExperimentConfig parse_config(const json& j)
{
    ExperimentConfig c = default_config();
    Reader root(j, "");

    {
        Reader r = root.sub("ring");
        read_cavity(r, c.ring.cavity, c.ring.profile, false);
        if (!(c.ring.profile.ng > 0)) throw ConfigError(r.key("ng"), "must be positive");
        r.num("gamma", c.ring.gamma, true);
        r.num("P_in", c.ring.P_in, true);
        r.finish();
    }
    {
        Reader r = root.sub("lle");
        if (auto p = r.find("schedule")) {
            if (!p->is_array() || p->empty()) throw ConfigError(r.key("schedule"), "expected [[time_s, delta], ...]");
            c.lle.schedule.clear();
            for (std::size_t i = 0; i < p->size(); ++i) {
                const auto& e = (*p)[i];
                const std::string at = r.key("schedule") + "[" + std::to_string(i) + "]";
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                    throw ConfigError(at, "expected [time_s, delta]");
                if (!c.lle.schedule.empty() && e[0].get<double>() <= c.lle.schedule.back().time)
                    throw ConfigError(at, "times must increase");
                c.lle.schedule.push_back({e[0].get<double>(), e[1].get<double>()});
            }
        }
        std::string ramp = name_of(ramps, c.lle.ramp);
        r.str("ramp", ramp);
        if (!ramps.count(ramp)) throw ConfigError(r.key("ramp"), "expected \"step\" or \"linear\"");
        c.lle.ramp = ramps.at(ramp);
        r.integer("M", c.lle.M, 2);
        if (c.lle.M & (c.lle.M - 1)) throw ConfigError(r.key("M"), "must be a power of two");
        r.num("dt_fraction", c.lle.dt_fraction, true);
        r.num("duration", c.lle.duration, true);
        r.num("window", c.lle.window, true);
        r.integer("seeds", c.lle.seeds, 1);
        if (c.lle.duration < c.lle.schedule.back().time)
            throw ConfigError(r.key("duration"), "must cover the detuning schedule");
        r.finish();
    }
    {
        Reader r = root.sub("quantum_ring");
        auto& q = c.quantum;
        r.num("fsr_hz", q.fsr_hz, true);
        read_cavity(r, q.ring.cavity, q.ring.profile, true);
        if (q.ring.cavity.L == 0) q.ring.cavity.L = 1.0 / (q.ring.profile.beta[0] * q.fsr_hz);
        if (q.ring.profile.ng == 0) q.ring.profile.ng = q.ring.profile.beta[0] * phys::c;
        if (q.ring.profile.ng < 0) throw ConfigError(r.key("ng"), "must be >= 0");
        double sigma_hz = q.ring.sigma / (2 * std::numbers::pi);
        r.num("sigma_hz", sigma_hz);
        q.ring.sigma = 2 * std::numbers::pi * sigma_hz;
        r.num("P_in", q.ring.P_in, true);
        r.num("g0", q.ring.g0);
        std::string pm = name_of(pumps, q.ring.pump_model);
        r.str("pump_model", pm);
        if (!pumps.count(pm)) throw ConfigError(r.key("pump_model"), "expected \"resonance_locked\" or \"steady_state\"");
        q.ring.pump_model = pumps.at(pm);
        r.num("kappa_i_override", q.ring.kappa_i_override);
        r.integer("grid_points", q.grid.points, 2);
        r.num("span_kappa", q.grid.span_kappa, true);
        r.integer("l_cap", q.l_cap, 1);
        r.finish();
    }
    {
        Reader r = root.sub("loss");
        auto& l = c.loss;
        r.num("ibs_insertion_db", l.ibs_insertion_db);
        r.num("dl_per_meter_db", l.dl_per_meter_db);
        r.num("crossing_db", l.crossing_db);
        r.num("dl_length_m", l.dl_length_m);
        r.array("ibs_count", l.ibs_count, 4);
        r.array("dl_count", l.dl_count, 4);
        r.array("crossing_count", l.crossing_count, 4);
        r.num("eta_override", c.eta_override);
        if (c.eta_override > 1) throw ConfigError(r.key("eta_override"), "must be <= 1");
        r.finish();
    }
    {
        Reader r = root.sub("chip");
        r.str("preset", c.preset);
        if (!c.preset.empty()) {
            try {
                const ChipProgram p = preset(c.preset);
                c.chip.bmzi_E1 = p.bmzi_E1, c.chip.bmzi_E2 = p.bmzi_E2, c.chip.bmzi_E3 = p.bmzi_E3;
                c.chip.dimension = p.dimension;
            } catch (const std::invalid_argument& e) {
                throw ConfigError(r.key("preset"), e.what());
            }
        }
        r.num("E1", c.chip.bmzi_E1);
        r.num("E2", c.chip.bmzi_E2);
        r.num("E3", c.chip.bmzi_E3);
        r.integer("Delta", c.chip.Delta, 1);
        r.integer("dimension", c.chip.dimension, 0);
        r.integer("l_max", c.chip.l_max, 1);
        r.integer("t_max", c.chip.t_max, 1);
        try {
            c.chip.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("chip", e.what());
        }
        r.finish();
    }
    {
        Reader r = root.sub("mbqc");
        if (auto p = r.find("r")) {
            if (!p->is_array() || p->size() < 2) throw ConfigError(r.key("r"), "expected at least two squeezing values");
            c.mbqc.r.clear();
            for (std::size_t i = 0; i < p->size(); ++i) {
                if (!(*p)[i].is_number()) throw ConfigError(r.key("r") + "[" + std::to_string(i) + "]", "expected a number");
                c.mbqc.r.push_back((*p)[i].get<double>());
            }
        }
        r.integer("patterns", c.mbqc.patterns, 1);
        r.integer("seed", c.mbqc.seed, 0);
        r.integer("l_max", c.mbqc.l_max, 7);
        r.integer("t_max", c.mbqc.t_max, 2);
        r.finish();
    }
    root.finish();
    try {
        c.ring.cavity.validate();
        c.ring.profile.validate();
        c.quantum.ring.cavity.validate();
        c.quantum.ring.profile.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("<root>", e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw ConfigError("<file>", "cannot open " + file.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("parse error: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c)
{
    json j;
    j["ring"] = cavity_json(c.ring.cavity, c.ring.profile);
    j["ring"]["gamma"] = c.ring.gamma;
    j["ring"]["P_in"] = c.ring.P_in;

    json sched = json::array();
    for (auto& p : c.lle.schedule) sched.push_back({p.time, p.delta});
    j["lle"] = {{"schedule", sched},        {"ramp", name_of(ramps, c.lle.ramp)},
                {"M", c.lle.M},             {"dt_fraction", c.lle.dt_fraction},
                {"duration", c.lle.duration}, {"window", c.lle.window},
                {"seeds", c.lle.seeds}};

    const auto& q = c.quantum;
    j["quantum_ring"] = cavity_json(q.ring.cavity, q.ring.profile);
    auto& jq = j["quantum_ring"];
    jq["fsr_hz"] = q.fsr_hz;
    jq["sigma_hz"] = q.ring.sigma / (2 * std::numbers::pi);
    jq["P_in"] = q.ring.P_in;
    jq["g0"] = q.ring.g0;
    jq["pump_model"] = name_of(pumps, q.ring.pump_model);
    jq["kappa_i_override"] = q.ring.kappa_i_override;
    jq["grid_points"] = q.grid.points;
    jq["span_kappa"] = q.grid.span_kappa;
    jq["l_cap"] = q.l_cap;

    const auto& l = c.loss;
    j["loss"] = {{"ibs_insertion_db", l.ibs_insertion_db}, {"dl_per_meter_db", l.dl_per_meter_db},
                 {"crossing_db", l.crossing_db},           {"dl_length_m", l.dl_length_m},
                 {"ibs_count", l.ibs_count},               {"dl_count", l.dl_count},
                 {"crossing_count", l.crossing_count},     {"eta_override", c.eta_override}};

    j["chip"] = {{"preset", c.preset},        {"E1", c.chip.bmzi_E1},     {"E2", c.chip.bmzi_E2},
                 {"E3", c.chip.bmzi_E3},      {"Delta", c.chip.Delta},    {"dimension", c.chip.dimension},
                 {"l_max", c.chip.l_max},     {"t_max", c.chip.t_max}};
    j["mbqc"] = {{"r", c.mbqc.r},           {"patterns", c.mbqc.patterns}, {"seed", c.mbqc.seed},
                 {"l_max", c.mbqc.l_max},   {"t_max", c.mbqc.t_max}};
    return j;
}

std::string config_hash(const ExperimentConfig& cfg)
{
    const std::string s = to_json(cfg).dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_Digest(s.data(), s.size(), md, &n, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned i = 0; i < 8 && i < n; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

LLEParams lle_params(const ExperimentConfig& cfg)
{
    LLEParams p = lle_params_from_ring(cfg.ring.cavity, cfg.ring.profile, cfg.ring.gamma, cfg.ring.P_in,
                                       cfg.lle.schedule, cfg.lle.M);
    p.ramp = cfg.lle.ramp;
    return p;
}

double eta_for(const ExperimentConfig& cfg, int dimension)
{
    return cfg.eta_override >= 0 ? cfg.eta_override : cfg.loss.eta(dimension);
}

json graph_json(const SimplifiedGraph& g)
{
    json edges = json::array();
    for (int i = 0; i < g.modes(); ++i)
        for (auto [j, w] : g.row(i))
            if (j > i) edges.push_back({i, j, w});
    return {{"modes", g.labels()}, {"edges", edges}, {"C", g.C()}, {"r", g.r()}};
}

json cluster_json(const ClusterGraph& g)
{
    json j = graph_json(g.graph);
    json st = json::array();
    for (auto& s : g.stages) st.push_back({{"name", s.name}, {"C", s.C}});
    j["stages"] = st;
    j["program"] = {{"E1", g.program.bmzi_E1}, {"E2", g.program.bmzi_E2}, {"E3", g.program.bmzi_E3},
                    {"Delta", g.program.Delta}, {"dimension", g.program.dimension},
                    {"l_max", g.program.l_max}, {"t_max", g.program.t_max}};
    return j;
}

std::string macronode_dot(const ClusterGraph& g)
{
    const MacronodeView v = macronode_coarse_grain(g);
    std::ostringstream os;
    os << "graph macronodes {\n  node [shape=circle];\n";
    for (std::size_t i = 0; i < v.nodes.size(); ++i)
        os << "  n" << i << " [label=\"" << v.nodes[i].l << "," << v.nodes[i].t << "\""
           << (class_plus(v.nodes[i].l) ? ", color=red" : ", color=gray") << "];\n";
    for (std::size_t i = 0; i < v.adjacency.size(); ++i)
        for (int k : v.adjacency[i])
            if (k > static_cast<int>(i)) os << "  n" << i << " -- n" << k << ";\n";
    os << "}\n";
    return os.str();
}

namespace {

void row(std::ostream& os, TableFormat f, std::initializer_list<double> vals)
{
    const char* sep = f == TableFormat::csv ? "," : " ";
    bool first = true;
    for (double v : vals) {
        if (!first) os << sep;
        os << v;
        first = false;
    }
    os << '\n';
}

}  // namespace

void write_spectrum(std::ostream& os, const SqueezingSpectrum& s, TableFormat f)
{
    os << std::setprecision(10);
    os << (f == TableFormat::csv ? "omega_Hz,squeezed_dB,antisqueezed_dB,theta_opt_rad\n"
                                 : "# omega_Hz squeezed_dB antisqueezed_dB theta_opt_rad\n");
    for (std::size_t i = 0; i < s.omega.size(); ++i)
        row(os, f, {s.omega[i] / (2 * std::numbers::pi), s.squeezed_db[i], s.antisqueezed_db[i], s.theta_opt[i]});
}

void write_comb(std::ostream& os, const CombReport& r, double fsr_hz, TableFormat f)
{
    os << std::setprecision(12);
    os << (f == TableFormat::csv ? "line,offset_Hz,power_dBc\n" : "# line offset_Hz power_dBc\n");
    const int M = static_cast<int>(r.line_dbc.size());
    for (int i = 0; i < M; ++i) {
        const int k = i - M / 2;
        row(os, f, {double(k), k * fsr_hz, r.line_dbc[i]});
    }
}

void write_waveform(const std::filesystem::path& base, const FieldState& s, const json& header)
{
    std::vector<float> buf;
    buf.reserve(2 * s.envelope.size());
    for (auto& e : s.envelope) buf.push_back(float(e.real())), buf.push_back(float(e.imag()));
    std::ofstream bin(base.string() + ".bin", std::ios::binary);
    bin.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size() * sizeof(float)));
    if (!bin) throw std::runtime_error("cannot write " + base.string() + ".bin");

    json h = header;
    h["samples"] = s.envelope.size();
    h["dtype"] = "float32";
    h["layout"] = "interleaved re,im";
    h["slow_time_s"] = s.slow_time;
    write_json(base.string() + ".json", h);
}

void write_json(const std::filesystem::path& file, const json& j)
{
    std::ofstream out(file);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + file.string());
}

}  // namespace cvchip
