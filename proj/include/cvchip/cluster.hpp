#pragma once

#include "cvchip/gaussian.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cvchip {

struct ModeLabel {
    char spatial = 'a';
    int l = 1;
    int t = 0;

    // canonical order (t, l, spatial)
    auto operator<=>(const ModeLabel& o) const
    {
        if (auto c = t <=> o.t; c != 0) return c;
        if (auto c = l <=> o.l; c != 0) return c;
        return spatial <=> o.spatial;
    }
    bool operator==(const ModeLabel&) const = default;
    std::string str() const;
};

struct ChipProgram {
    double bmzi_E1 = 0.5;  // dual-rail BMZIs (a,b) and (c,d)
    double bmzi_E2 = 0.5;  // BMZIs after the delay line
    double bmzi_E3 = 0.5;  // stitching BMZIs (a,c) and (b,d)
    int Delta = 3;
    int dimension = 3;  // 0..2: dedicated circuits; 3: programmable chip
    int l_max = 9;
    int t_max = 3;

    void validate() const;
};

struct StageInfo {
    std::string name;
    double C;
};

struct SourceMode {
    ModeLabel label;  // label at generation (before the delay line)
    int pump;
    int partner;
};

struct ClusterGraph {
    SimplifiedGraph graph;
    std::vector<ModeLabel> labels;
    std::vector<StageInfo> stages;
    std::vector<SourceMode> sources;
    // row m: output mode m as a combination of source modes (real orthogonal)
    std::vector<std::map<int, double>> network;
    ChipProgram program;

    int modes() const { return static_cast<int>(labels.size()); }
    std::optional<int> find(const ModeLabel& m) const;
    int index(const ModeLabel& m) const;
    double final_C() const { return stages.back().C; }
    ClusterGraph with_squeezing(double r) const;
};

int pump_of(char rail, int dimension, int Delta);
bool class_plus(int l);  // l = 1 mod 4

ClusterGraph build(const ChipProgram& program);
ChipProgram preset(const std::string& name);
double preset_C(const std::string& name);
const std::vector<std::string>& preset_names();

// most common nonzero |E_ij|; equals the stage C away from the window edges
double interior_edge_magnitude(const ClusterGraph& g);

struct Nullifier {
    int mode;
    std::map<int, double> q;  // row of (I + V)
    std::map<int, double> p;  // row of (I - V)
};

std::vector<Nullifier> nullifiers(const ClusterGraph& g);
std::vector<Nullifier> nullifiers(const SimplifiedGraph& g);
// 2N quadrature vectors for the q- and p-nullifier
Vec q_vector(const Nullifier& n, int modes);
Vec p_vector(const Nullifier& n, int modes);

struct SizeEstimate {
    int spatial = 0;
    long spectral = 0;
    long spectral2 = 1;  // second frequency axis (3D only)
    double tau = 1.0;    // temporal extent, 1 for d < 2
    std::string str() const;
};

SizeEstimate size(int dimension, long l3db_pairs, double tau);

struct Macronode {
    int l, t;
    std::array<int, 4> modes;  // a,b,c,d mode indices, -1 if absent
    bool complete() const;
};

struct MacronodeView {
    std::vector<Macronode> nodes;
    std::vector<std::vector<int>> adjacency;  // macronode indices
    std::vector<int> degree() const;
};

MacronodeView macronode_coarse_grain(const ClusterGraph& g);
int mode_degree(const ClusterGraph& g, int mode);

}  // namespace cvchip
