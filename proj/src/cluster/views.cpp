#include "cvchip/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cvchip {

std::vector<Nullifier> nullifiers(const SimplifiedGraph& g)
{
    std::vector<Nullifier> out;
    out.reserve(g.modes());
    for (int i = 0; i < g.modes(); ++i) {
        Nullifier n{i, {{i, 1.0}}, {{i, 1.0}}};
        for (auto [j, v] : g.row(i)) {
            n.q[j] += v;
            n.p[j] -= v;
        }
        out.push_back(std::move(n));
    }
    return out;
}

std::vector<Nullifier> nullifiers(const ClusterGraph& g) { return nullifiers(g.graph); }

Vec q_vector(const Nullifier& n, int modes)
{
    Vec c = Vec::Zero(2 * modes);
    for (auto [j, v] : n.q) c(j) = v;
    return c;
}

Vec p_vector(const Nullifier& n, int modes)
{
    Vec c = Vec::Zero(2 * modes);
    for (auto [j, v] : n.p) c(modes + j) = v;
    return c;
}

std::string SizeEstimate::str() const
{
    std::ostringstream os;
    os << spatial << "x" << spectral;
    if (spectral2 > 1) os << "x" << spectral2;
    if (tau != 1.0 || spectral2 > 1 || spatial == 0) os << "xtau";
    return os.str();
}

SizeEstimate size(int dimension, long l3db_pairs, double tau)
{
    if (l3db_pairs <= 0) throw std::invalid_argument("size: pair count must be positive");
    if (tau < 0) throw std::invalid_argument("size: tau must be >= 0");
    SizeEstimate s;
    switch (dimension) {
    case 0: s.spatial = 1, s.spectral = 2 * l3db_pairs; break;
    case 1: s.spatial = 2, s.spectral = 2 * l3db_pairs; break;
    case 2: s.spatial = 2, s.spectral = 2 * l3db_pairs, s.tau = tau; break;
    case 3: {
        // spectral modes folded onto a Delta x Delta cylinder, Delta ~ sqrt(pairs)
        const long f = static_cast<long>(std::floor(std::sqrt(static_cast<double>(l3db_pairs)) + 1e-9));
        s.spatial = 4, s.spectral = f, s.spectral2 = f, s.tau = tau;
        break;
    }
    default: throw std::invalid_argument("size: dimension must be 0..3");
    }
    return s;
}

bool Macronode::complete() const
{
    return std::all_of(modes.begin(), modes.end(), [](int m) { return m >= 0; });
}

std::vector<int> MacronodeView::degree() const
{
    std::vector<int> d;
    for (const auto& a : adjacency) d.push_back(static_cast<int>(a.size()));
    return d;
}

MacronodeView macronode_coarse_grain(const ClusterGraph& g)
{
    if (g.program.dimension != 3) throw std::invalid_argument("macronode view needs a 3D chip graph");
    MacronodeView v;
    std::map<std::pair<int, int>, int> id;
    std::vector<int> owner(g.modes());
    for (int i = 0; i < g.modes(); ++i) {
        const auto& m = g.labels[i];
        auto key = std::make_pair(m.l, m.t);
        auto it = id.find(key);
        if (it == id.end()) {
            it = id.emplace(key, static_cast<int>(v.nodes.size())).first;
            v.nodes.push_back({m.l, m.t, {-1, -1, -1, -1}});
        }
        v.nodes[it->second].modes[m.spatial - 'a'] = i;
        owner[i] = it->second;
    }
    std::vector<std::set<int>> adj(v.nodes.size());
    for (int i = 0; i < g.modes(); ++i)
        for (auto [j, w] : g.graph.row(i))
            if (owner[j] != owner[i]) adj[owner[i]].insert(owner[j]);
    for (auto& s : adj) v.adjacency.emplace_back(s.begin(), s.end());
    return v;
}

int mode_degree(const ClusterGraph& g, int mode)
{
    int n = 0;
    for (auto [j, w] : g.graph.row(mode))
        if (j != mode) ++n;
    return n;
}

}  // namespace cvchip
