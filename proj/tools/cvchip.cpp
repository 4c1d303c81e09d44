#include "cvchip/io.hpp"
#include "cvchip/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <thread>

using namespace cvchip;
namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, config_error = 2, verify_failed = 3, blow_up = 4 };

struct Common {
    std::string config;
    std::string out = ".";
    int threads = 0;
    std::string format = "csv";

    TableFormat table() const { return format == "plot" ? TableFormat::plot : TableFormat::csv; }
    std::string ext() const { return format == "plot" ? ".dat" : ".csv"; }
    int nthreads() const { return threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency()); }
};

ExperimentConfig load(const Common& c)
{
    return c.config.empty() ? default_config() : load_config(c.config);
}

fs::path outdir(const Common& c)
{
    fs::create_directories(c.out);
    return c.out;
}

int cmd_comb(const Common& c, std::vector<std::uint64_t> seeds)
{
    const ExperimentConfig cfg = load(c);
    const std::string hash = config_hash(cfg);
    const LLEParams prm = lle_params(cfg);
    const double pth = threshold_power(cfg.ring.cavity, cfg.ring.profile);
    const double fsr_hz = fsr(cfg.ring.profile.ng, cfg.ring.cavity.L);
    if (seeds.empty())
        for (int s = 1; s <= cfg.lle.seeds; ++s) seeds.push_back(s);

    RunOptions opt;
    opt.dt = prm.t_R / cfg.lle.dt_fraction;
    opt.duration = cfg.lle.duration;
    opt.window = cfg.lle.window;

    // seeds are independent; results written in seed order
    std::vector<std::future<CombReport>> jobs;
    std::vector<CombReport> reps;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (static_cast<int>(jobs.size()) == c.nthreads()) {
            for (auto& j : jobs) reps.push_back(j.get());
            jobs.clear();
        }
        jobs.push_back(std::async(std::launch::async, [&, s = seeds[i]] { return run(prm, s, opt); }));
    }
    for (auto& j : jobs) reps.push_back(j.get());

    const fs::path dir = outdir(c);
    json seeds_json = json::array();
    bool any = false;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& r = reps[i];
        const std::string tag = "seed" + std::to_string(seeds[i]);
        std::ofstream csv(dir / ("comb_" + tag + c.ext()));
        write_comb(csv, r, fsr_hz, c.table());
        write_waveform(dir / ("waveform_" + tag), r.final_state,
                       {{"config_hash", hash}, {"seed", seeds[i]}, {"t_R_s", prm.t_R}});
        seeds_json.push_back({{"seed", seeds[i]},
                              {"lines_above_60dBc", r.lines_above_60},
                              {"stationarity", r.stationarity},
                              {"stable", r.stable},
                              {"alias_fraction", r.alias_fraction},
                              {"aliased", r.aliased}});
        const bool broadband = r.stable && r.lines_above_60 > 200;
        any = any || broadband;
        std::cout << tag << ": lines above -60 dBc " << r.lines_above_60 << ", stationarity " << r.stationarity
                  << ", stable " << (r.stable ? "true" : "false") << "\n";
    }
    const std::string regime = cfg.ring.P_in < pth ? "below threshold" : "above threshold";
    write_json(dir / "comb_report.json", {{"config_hash", hash},
                                          {"P_in_W", cfg.ring.P_in},
                                          {"P_th_W", pth},
                                          {"regime", regime},
                                          {"seeds", seeds_json},
                                          {"broadband_stable_comb", any}});
    std::cout << "P_th " << pth * 1e3 << " mW, " << regime << "\n";
    return ok;
}

int cmd_spectra(const Common& c, int dimension)
{
    const ExperimentConfig cfg = load(c);
    const std::string hash = config_hash(cfg);
    const auto& q = cfg.quantum;
    const double pth = threshold_power(q.ring.cavity, q.ring.profile);
    if (q.ring.P_in >= pth)
        throw ConfigError("quantum_ring.P_in", "pump " + std::to_string(q.ring.P_in) + " W is above threshold " +
                                                   std::to_string(pth) + " W");

    const long l3 = l3db(q.ring, q.grid, q.l_cap, c.threads);
    const fs::path dir = outdir(c);
    std::vector<int> dims;
    if (dimension >= 0)
        dims.push_back(dimension);
    else
        dims = {0, 1, 2, 3};
    for (int d : dims) {
        const double eta = eta_for(cfg, d);
        const auto s = nullifier_spectrum_eta(d, q.ring, eta, 1, q.grid);
        std::ofstream csv(dir / ("spectrum_d" + std::to_string(d) + c.ext()));
        write_spectrum(csv, s, c.table());
        write_json(dir / ("summary_d" + std::to_string(d) + ".json"),
                   {{"config_hash", hash},
                    {"dimension", d},
                    {"eta", eta},
                    {"max_squeezing_db", s.max_squeezing_db()},
                    {"antisqueezing_at_max_db", s.antisqueezing_at_max_db()},
                    {"l3db", l3}});
        std::cout << "d=" << d << ": max squeezing " << s.max_squeezing_db() << " dB, antisqueezing "
                  << s.antisqueezing_at_max_db() << " dB, l3db " << l3 << "\n";
        if (eta == 1.0 && q.ring.kappa_i_override == 0.0) {
            // pure state: squeezed and antisqueezed variances multiply to the vacuum
            double worst = 0;
            for (std::size_t i = 0; i < s.omega.size(); ++i)
                worst = std::max(worst, std::abs(s.squeezed_db[i] + s.antisqueezed_db[i]));
            std::cout << "  pure-state product check: max |sq + anti| = " << worst << " dB\n";
        }
    }
    return ok;
}

int cmd_cluster(const Common& c, std::string name, int l_max, int t_max)
{
    const ExperimentConfig cfg = load(c);
    ChipProgram prog = cfg.chip;
    if (name.empty()) name = cfg.preset;
    if (!name.empty()) {
        try {
            prog = preset(name);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("--preset", e.what());
        }
    }
    if (l_max > 0) prog.l_max = l_max;
    if (t_max > 0) prog.t_max = t_max;
    try {
        prog.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("chip", e.what());
    }
    const ClusterGraph g = build(prog);
    const std::string tag = name.empty() ? "custom" : name;
    const fs::path dir = outdir(c);

    json j = cluster_json(g);
    j["config_hash"] = config_hash(cfg);
    j["preset"] = tag;
    std::map<int, int> hist, complete;
    if (prog.dimension == 3) {
        const auto v = macronode_coarse_grain(g);
        const auto deg = v.degree();
        for (std::size_t i = 0; i < deg.size(); ++i) {
            ++hist[deg[i]];
            if (v.nodes[i].complete()) ++complete[deg[i]];
        }
        std::ofstream(dir / ("cluster_" + tag + ".dot")) << macronode_dot(g);
        auto as_json = [](const std::map<int, int>& m) {
            json h = json::object();
            for (auto [d, n] : m) h[std::to_string(d)] = n;
            return h;
        };
        j["macronode_degree_histogram"] = as_json(hist);
        j["complete_macronode_degree_histogram"] = as_json(complete);
    }
    write_json(dir / ("cluster_" + tag + ".json"), j);

    std::cout << tag << ": " << g.modes() << " modes, " << g.graph.edge_count() << " edges, C = " << g.final_C()
              << "\n";
    auto show = [](const char* what, const std::map<int, int>& m) {
        std::cout << what << ":";
        for (auto [d, n] : m) std::cout << " " << d << ":" << n;
        std::cout << "\n";
    };
    if (!hist.empty()) {
        show("macronode degree histogram", hist);
        // window-edge macronodes miss rails; the complete ones show the lattice
        show("complete macronodes", complete);
    }
    return ok;
}

int cmd_verify(const Common& c, const std::string& what)
{
    const ExperimentConfig cfg = load(c);
    std::vector<Check> checks;
    if (what == "identities" || what == "all") {
        auto v = verify_identities();
        checks.insert(checks.end(), v.begin(), v.end());
    }
    if (what == "nullifiers" || what == "all") {
        auto v = verify_nullifiers();
        checks.insert(checks.end(), v.begin(), v.end());
    }
    json arr = json::array();
    for (const auto& k : checks) {
        arr.push_back({{"name", k.name}, {"value", k.value}, {"tolerance", k.tol}, {"pass", k.pass}, {"detail", k.detail}});
        std::cout << (k.pass ? "PASS " : "FAIL ") << k.name << ": " << k.value << " (tol " << k.tol << ")"
                  << (k.detail.empty() ? "" : ", " + k.detail) << "\n";
    }
    const bool pass = all_pass(checks);
    write_json(outdir(c) / ("verify_" + what + ".json"),
               {{"config_hash", config_hash(cfg)}, {"suite", what}, {"checks", arr}, {"pass", pass}});
    return pass ? ok : verify_failed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Programmable CV cluster-state chip: combs, squeezing spectra, graphs, identity checks"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--config", c.config, "JSON experiment config (defaults built in)");
    app.add_option("--out", c.out, "output directory");
    app.add_option("--threads", c.threads, "worker cap, 0 = hardware")->check(CLI::NonNegativeNumber);
    app.add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "plot"}));

    auto* comb = app.add_subcommand("comb", "LLE comb run over seeds");
    std::vector<std::uint64_t> seeds;
    comb->add_option("--seed", seeds, "seed(s); default 1..lle.seeds");

    auto* spectra = app.add_subcommand("spectra", "nullifier squeezing spectra");
    int dimension = -1;
    spectra->add_option("--dimension", dimension, "0..3, default all")->check(CLI::Range(0, 3));

    auto* cluster = app.add_subcommand("cluster", "build a cluster graph and export it");
    std::string preset_name;
    int l_max = 0, t_max = 0;
    cluster->add_option("--preset", preset_name, "chip preset")->check(CLI::IsMember(preset_names()));
    cluster->add_option("--l-max", l_max, "spectral window");
    cluster->add_option("--t-max", t_max, "time slots");

    auto* verify = app.add_subcommand("verify", "identity and nullifier suites");
    std::string what = "all";
    verify->add_option("what", what, "nullifiers | identities | all")->check(CLI::IsMember({"nullifiers", "identities", "all"}));

    auto* show = app.add_subcommand("config", "print the effective config and its hash");

    for (auto* s : {comb, spectra, cluster, verify, show}) s->fallthrough();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*comb) return cmd_comb(c, seeds);
        if (*spectra) return cmd_spectra(c, dimension);
        if (*cluster) return cmd_cluster(c, preset_name, l_max, t_max);
        if (*verify) return cmd_verify(c, what);
        if (*show) {
            const ExperimentConfig cfg = load(c);
            std::cout << to_json(cfg).dump(2) << "\n";
            std::cerr << "config hash " << config_hash(cfg) << "\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.what() << "\n";
        return config_error;
    } catch (const BlowUp& e) {
        std::cerr << e.what() << "\n";
        return blow_up;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return ok;
}
