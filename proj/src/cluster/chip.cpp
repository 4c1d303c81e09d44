#include "cvchip/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cvchip {

std::string ModeLabel::str() const
{
    return std::string(1, spatial) + ":" + std::to_string(l) + ":" + std::to_string(t);
}

bool class_plus(int l) { return ((l % 4) + 4) % 4 == 1; }

void ChipProgram::validate() const
{
    for (double r : {bmzi_E1, bmzi_E2, bmzi_E3})
        if (r < 0 || r > 1) throw std::invalid_argument("splitting ratio outside [0,1]");
    if (dimension < 0 || dimension > 3) throw std::invalid_argument("dimension must be 0..3");
    if (Delta < 1 || Delta % 2 == 0) throw std::invalid_argument("Delta must be an odd positive integer");
    if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
    const int need = dimension == 0 ? 1 : dimension < 3 ? 3 : Delta + 2;
    if (l_max < need)
        throw std::invalid_argument("l_max = " + std::to_string(l_max) + " below minimum " +
                                    std::to_string(need) + " for dimension " + std::to_string(dimension));
}

int pump_of(char rail, int dimension, int Delta)
{
    switch (rail) {
    case 'a': return 0;
    case 'b': return 2;
    case 'c': return 1 + Delta;
    case 'd': return 1 - Delta;
    default: break;
    }
    (void)dimension;
    throw std::invalid_argument("unknown rail");
}

std::optional<int> ClusterGraph::find(const ModeLabel& m) const
{
    auto it = std::lower_bound(labels.begin(), labels.end(), m);
    if (it == labels.end() || !(*it == m)) return std::nullopt;
    return static_cast<int>(it - labels.begin());
}

int ClusterGraph::index(const ModeLabel& m) const
{
    if (auto i = find(m)) return *i;
    throw std::out_of_range("mode " + m.str() + " not in graph");
}

ClusterGraph ClusterGraph::with_squeezing(double r) const
{
    ClusterGraph g = *this;
    g.graph.set_r(r);
    return g;
}

namespace {

// mutable build state in source order
struct Work {
    std::vector<ModeLabel> cur;
    std::map<ModeLabel, int> where;
    std::vector<SourceMode> src;
    std::vector<std::map<int, double>> O;

    int at(char s, int l, int t) const
    {
        auto it = where.find({s, l, t});
        return it == where.end() ? -1 : it->second;
    }
};

void mix_rows(std::vector<std::map<int, double>>& rows, int j, int k, double t, double s)
{
    std::map<int, double> nj, nk;
    for (auto [m, w] : rows[j]) nj[m] += t * w, nk[m] += s * w;
    for (auto [m, w] : rows[k]) nj[m] -= s * w, nk[m] += t * w;
    auto clean = [](std::map<int, double>& r) {
        std::erase_if(r, [](const auto& kv) { return std::abs(kv.second) < 1e-15; });
    };
    clean(nj), clean(nk);
    rows[j] = std::move(nj);
    rows[k] = std::move(nk);
}

}  // namespace

ClusterGraph build(const ChipProgram& prog)
{
    prog.validate();
    const int d = prog.dimension;
    std::string rails = d == 0 ? "a" : d < 3 ? "ab" : "abcd";
    const int T = d >= 2 ? prog.t_max : 1;

    Work w;
    auto in_window = [&](int l) { return l >= -prog.l_max && l <= prog.l_max; };
    for (int t = 0; t < T; ++t)
        for (char s : rails) {
            const int p = pump_of(s, d, prog.Delta);
            for (int l = -prog.l_max; l <= prog.l_max; ++l) {
                if (l % 2 == 0 || !in_window(2 * p - l)) continue;
                const int i = static_cast<int>(w.cur.size());
                w.cur.push_back({s, l, t});
                w.where[{s, l, t}] = i;
                w.src.push_back({{s, l, t}, p, -1});
            }
        }
    const int n = static_cast<int>(w.cur.size());
    w.O.resize(n);
    for (int i = 0; i < n; ++i) w.O[i][i] = 1.0;

    std::vector<std::string> tmp(n);
    SimplifiedGraph g(tmp, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& m = w.src[i].label;
        const int j = w.at(m.spatial, 2 * w.src[i].pump - m.l, m.t);
        w.src[i].partner = j;
        if (i < j) g.add_edge(i, j, -1.0);
    }

    std::vector<StageInfo> stages{{"tmss", 1.0}};
    double C = 1.0;
    auto mix = [&](int j, int k, double rho) {
        if (j < 0 || k < 0 || rho == 1.0) return;  // open boundary: missing partner passes through
        g.splitter(j, k, rho);
        mix_rows(w.O, j, k, std::sqrt(rho), std::sqrt(1.0 - rho));
    };
    auto stage_factor = [](double rho, double f) { return rho == 1.0 ? 1.0 : f; };

    if (d >= 1) {
        const double rho = d < 3 ? 0.5 : prog.bmzi_E1;
        for (int t = 0; t < T; ++t)
            for (int l = -prog.l_max; l <= prog.l_max; l += 2) {
                mix(w.at('a', l, t), w.at('b', l, t), rho);
                if (d == 3) mix(w.at('c', l, t), w.at('d', l, t), rho);
            }
        C *= stage_factor(rho, 0.5);
        stages.push_back({"dual-rail", C});
    }
    if (d == 3) {
        const double rho = prog.bmzi_E3;
        for (int t = 0; t < T; ++t)
            for (int l = -prog.l_max; l <= prog.l_max; l += 2) {
                mix(w.at('a', l, t), w.at('c', l, t), rho);
                mix(w.at('b', l, t), w.at('d', l, t), rho);
            }
        C *= stage_factor(rho, 0.5);
        stages.push_back({"stitch", C});
    }
    if (d >= 2) {
        // class l = 3 mod 4 on rails a (and c) goes through the delay line
        std::map<ModeLabel, int> moved;
        for (int i = 0; i < n; ++i) {
            auto& m = w.cur[i];
            if ((m.spatial == 'a' || m.spatial == 'c') && !class_plus(m.l)) ++m.t;
            moved[m] = i;
        }
        w.where = std::move(moved);
        stages.push_back({"delay", C});

        const double rho = d < 3 ? 0.5 : prog.bmzi_E2;
        for (int t = 0; t <= T; ++t)
            for (int l = -prog.l_max; l <= prog.l_max; l += 2) {
                if (class_plus(l)) continue;
                mix(w.at('a', l, t), w.at('b', l, t), rho);
                if (d == 3) mix(w.at('c', l, t), w.at('d', l, t), rho);
            }
        C *= stage_factor(rho, 1.0 / std::sqrt(2.0));
        stages.push_back({"final", C});
    }

    // canonical ordering
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return w.cur[x] < w.cur[y]; });
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[order[i]] = i;

    std::vector<std::string> names(n);
    std::vector<ModeLabel> labels(n);
    for (int i = 0; i < n; ++i) {
        labels[i] = w.cur[order[i]];
        names[i] = labels[i].str();
    }
    SimplifiedGraph out(names, 0.0);
    for (int i = 0; i < n; ++i)
        for (auto [j, v] : g.row(order[i])) {
            if (j == order[i]) throw std::logic_error("build: network produced a self loop");
            if (rank[j] > i) out.add_edge(i, rank[j], v);
        }
    out.set_C(C);

    std::vector<std::map<int, double>> net(n);
    for (int i = 0; i < n; ++i) net[i] = w.O[order[i]];

    return {std::move(out), std::move(labels), std::move(stages), std::move(w.src), std::move(net), prog};
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"pairs", "wires", "2d_pairs_of_sheets",
                                                "bilayer_square", "quad_rail_train", "full_3d"};
    return names;
}

ChipProgram preset(const std::string& name)
{
    ChipProgram p;
    p.dimension = 3;
    auto set = [&](double e1, double e2, double e3) {
        p.bmzi_E1 = e1, p.bmzi_E2 = e2, p.bmzi_E3 = e3;
        return p;
    };
    if (name == "pairs") return set(1.0, 1.0, 1.0);
    if (name == "wires") return set(0.5, 1.0, 1.0);
    if (name == "2d_pairs_of_sheets") return set(0.5, 1.0, 0.5);
    if (name == "bilayer_square") return set(0.5, 0.5, 1.0);
    if (name == "quad_rail_train") return set(0.5, 1.0, 0.5);
    if (name == "full_3d") return set(0.5, 0.5, 0.5);
    throw std::invalid_argument("unknown preset '" + name + "'");
}

double preset_C(const std::string& name)
{
    const double r2 = std::sqrt(2.0);
    if (name == "pairs") return 1.0;
    if (name == "wires") return 0.5;
    if (name == "2d_pairs_of_sheets") return 0.25;
    if (name == "bilayer_square") return 1.0 / (2 * r2);
    if (name == "quad_rail_train") return 0.25;
    if (name == "full_3d") return 1.0 / (4 * r2);
    throw std::invalid_argument("unknown preset '" + name + "'");
}

double interior_edge_magnitude(const ClusterGraph& g)
{
    std::map<long long, int> hist;
    for (int i = 0; i < g.modes(); ++i)
        for (auto [j, v] : g.graph.row(i))
            if (j != i) ++hist[std::llround(std::abs(v) * 1e12)];
    if (hist.empty()) return 0.0;
    auto best = std::max_element(hist.begin(), hist.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    // return the exact value of a representative edge
    for (int i = 0; i < g.modes(); ++i)
        for (auto [j, v] : g.graph.row(i))
            if (j != i && std::llround(std::abs(v) * 1e12) == best->first) return std::abs(v);
    return 0.0;
}

}  // namespace cvchip
