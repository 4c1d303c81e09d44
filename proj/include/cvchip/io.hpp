#pragma once

#include "cvchip/cluster.hpp"
#include "cvchip/lle.hpp"
#include "cvchip/squeezer.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvchip {

using json = nlohmann::json;

// classical (comb) ring
struct RingSection {
    CavitySpec cavity;
    DispersionProfile profile;
    double gamma = 0.59;  // 1/(W m), used by the LLE
    double P_in = 1.2;
};

struct LleSection {
    std::vector<DetuningPoint> schedule;
    Ramp ramp = Ramp::step;
    int M = 8192;
    double dt_fraction = 10;  // dt = t_R / dt_fraction
    double duration = 110e-9;
    double window = 10e-9;
    int seeds = 5;
};

struct QuantumSection {
    QuantumRingConfig ring;
    double fsr_hz = 9.32e9;
    SpectrumGrid grid;
    long l_cap = 4001;
};

struct MbqcSection {
    std::vector<double> r{2, 4, 6};
    int patterns = 20;
    std::uint64_t seed = 5;
    int l_max = 23;
    int t_max = 3;
};

struct ExperimentConfig {
    RingSection ring;
    LleSection lle;
    QuantumSection quantum;
    LossBudget loss;
    double eta_override = -1;  // >= 0 replaces the loss budget
    ChipProgram chip;
    std::string preset;  // empty -> chip section as given
    MbqcSection mbqc;
};

// first offending key, e.g. "quantum_ring.sigma_hz"
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what);
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

ExperimentConfig default_config();
// keys not present keep their default; unknown keys are errors
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::filesystem::path& file);
json to_json(const ExperimentConfig& cfg);
// sha256 of the canonical dump, first 16 hex digits
std::string config_hash(const ExperimentConfig& cfg);

LLEParams lle_params(const ExperimentConfig& cfg);
double eta_for(const ExperimentConfig& cfg, int dimension);

// gaussian-core schema {modes, edges: [[i, j, w]], C, r}
json graph_json(const SimplifiedGraph& g);
json cluster_json(const ClusterGraph& g);
std::string macronode_dot(const ClusterGraph& g);

enum class TableFormat { csv, plot };

void write_spectrum(std::ostream& os, const SqueezingSpectrum& s, TableFormat f);
// line index, offset Hz, dBc
void write_comb(std::ostream& os, const CombReport& r, double fsr_hz, TableFormat f);
// <base>.bin raw float32 (re, im) pairs, <base>.json header
void write_waveform(const std::filesystem::path& base, const FieldState& s, const json& header);

void write_json(const std::filesystem::path& file, const json& j);

}  // namespace cvchip
