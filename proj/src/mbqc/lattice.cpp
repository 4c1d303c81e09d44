#include "cvchip/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cvchip {

using std::numbers::pi;

std::string DistributedMode::str() const
{
    static constexpr const char* names[4] = {"alpha", "beta", "gamma", "delta"};
    return "(" + std::to_string(node.l) + "," + std::to_string(node.t) + ")." + names[slot];
}

Lattice::Lattice(const ClusterGraph& g) : g_(g)
{
    const int n = g_.modes();
    M_ = Mat::Identity(n, n);
    std::map<MacronodeId, std::array<int, 4>> macs;
    for (int i = 0; i < n; ++i) {
        const auto& lab = g_.labels[i];
        auto [it, fresh] = macs.try_emplace({lab.l, lab.t}, std::array<int, 4>{-1, -1, -1, -1});
        it->second.at(lab.spatial - 'a') = i;
    }
    const Eigen::Matrix4d am = foursplitter_annihilation().real();
    for (const auto& [id, arms] : macs) {
        if (std::find(arms.begin(), arms.end(), -1) != arms.end()) continue;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) M_(arms[a], arms[b]) = am(a, b);
        for (int s = 0; s < 4; ++s) {
            dist_[{id, s}] = arms[s];
            rev_[arms[s]] = {id, s};
        }
    }
    Ed_ = M_.transpose() * g_.graph.edge_matrix() * M_;
}

int Lattice::index(const DistributedMode& d) const
{
    auto it = dist_.find(d);
    if (it == dist_.end()) throw std::out_of_range("no distributed mode " + d.str());
    return it->second;
}

std::vector<DistributedMode> Lattice::square(const DistributedMode& d) const
{
    std::vector<int> stack{index(d)};
    std::set<int> seen{stack.front()};
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < Ed_.cols(); ++v)
            if (std::abs(Ed_(u, v)) > 1e-9 && seen.insert(v).second) stack.push_back(v);
    }
    std::vector<DistributedMode> out;
    for (int i : seen) {
        auto it = rev_.find(i);
        if (it == rev_.end()) throw std::out_of_range("square of " + d.str() + " reaches the window edge");
        out.push_back(it->second);
    }
    return out;
}

DistributedMode Lattice::next_holder(const DistributedMode& d) const
{
    if (d.slot != 0 && d.slot != 2) throw std::invalid_argument("holder must be alpha or gamma");
    const auto sq = square({d.node, d.slot + 1});
    std::vector<DistributedMode> c;
    for (const auto& m : sq)
        if (is_red(m.node) && m.node != d.node && m.slot == d.slot) c.push_back(m);
    if (sq.size() != 4 || c.size() != 1) throw std::out_of_range("no unique next holder for " + d.str());
    return c.front();
}

std::vector<MacronodeId> Lattice::macronodes() const
{
    std::set<MacronodeId> ids;
    for (const auto& [d, i] : dist_) ids.insert(d.node);
    return {ids.begin(), ids.end()};
}

namespace {

void check_pattern(const Lattice& lat, const MeasurementPattern& p, const GaussianState& input)
{
    const auto& g = lat.graph();
    std::vector<std::string> problems;
    std::set<MacronodeId> touched;
    for (const auto& [lab, th] : p.angles) {
        if (!g.find(lab)) problems.push_back("unknown mode " + lab.str());
        touched.insert({lab.l, lab.t});
    }
    for (const auto& id : touched)
        for (char s : std::string("abcd")) {
            const ModeLabel lab{s, id.l, id.t};
            if (g.find(lab) && !p.angles.count(lab)) problems.push_back("uncovered mode " + lab.str());
        }
    for (const auto& [id, sign] : p.region) {
        if (sign != 1 && sign != -1) problems.push_back("region flag must be +-1");
        for (char s : std::string("abcd")) {
            auto it = p.angles.find({s, id.l, id.t});
            if (it != p.angles.end() && std::abs(std::remainder(it->second - sign * pi / 4, 2 * pi)) > 1e-12)
                problems.push_back("grey mode " + ModeLabel{s, id.l, id.t}.str() + " off its region basis");
        }
    }
    for (const auto* list : {&p.inputs, &p.outputs})
        for (const auto& d : *list)
            if (!lat.has(d)) problems.push_back("no distributed mode " + d.str());
    for (const auto& d : p.outputs)
        if (touched.count(d.node)) problems.push_back("output " + d.str() + " is measured");
    if (input.modes() != static_cast<int>(p.inputs.size()))
        problems.push_back("input state has " + std::to_string(input.modes()) + " modes for " +
                           std::to_string(p.inputs.size()) + " injection ports");
    if (!problems.empty()) {
        std::ostringstream os;
        os << "simulate_pattern:";
        for (const auto& s : problems) os << "\n  " << s;
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

PatternResult simulate_pattern(const Lattice& lat, const MeasurementPattern& pattern, const GaussianState& input,
                               double r)
{
    check_pattern(lat, pattern, input);
    const int n = lat.modes();

    SimplifiedGraph sg = lat.graph().graph;
    sg.set_r(r);
    sg.set_form(SimplifiedGraph::Form::squeezed);
    GaussianState s = graph_to_covariance(sg.expand());
    // pi/4 delays, then the distributed basis
    const double c = std::cos(-pi / 4), sn = std::sin(-pi / 4);
    Mat rot(2 * n, 2 * n);
    rot << c * Mat::Identity(n, n), -sn * Mat::Identity(n, n), sn * Mat::Identity(n, n), c * Mat::Identity(n, n);
    Mat mm = Mat::Zero(2 * n, 2 * n);
    mm.topLeftCorner(n, n) = lat.basis();
    mm.bottomRightCorner(n, n) = lat.basis();
    const Mat to_dist = mm.transpose() * rot;
    Mat sig = to_dist * s.cov * to_dist.transpose();
    Vec mean = Vec::Zero(2 * n);

    // delete the holder by a q measurement, then put the input there
    std::vector<int> ports;
    for (const auto& d : pattern.inputs) {
        const int j = lat.index(d);
        ports.push_back(j);
        const Vec v = sig.col(j);
        sig -= v * v.transpose() / v(j);
        sig.row(j).setZero(), sig.col(j).setZero();
        sig.row(n + j).setZero(), sig.col(n + j).setZero();
    }
    const int k = static_cast<int>(ports.size());
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            sig(ports[a], ports[b]) = input.cov(a, b);
            sig(ports[a], n + ports[b]) = input.cov(a, k + b);
            sig(n + ports[a], ports[b]) = input.cov(k + a, b);
            sig(n + ports[a], n + ports[b]) = input.cov(k + a, k + b);
        }
        mean(ports[a]) = input.mean(a);
        mean(n + ports[a]) = input.mean(k + a);
    }

    Mat C(pattern.angles.size(), 2 * n);
    int row = 0;
    for (const auto& [lab, th] : pattern.angles) {
        const int i = lat.graph().index(lab);
        Vec h = homodyne_row(n, i, th);
        C.row(row++) = (mm.transpose() * h).transpose();
    }
    const Mat K = sig * C.transpose();
    const Eigen::LDLT<Mat> Y(C * K);
    if (Y.info() != Eigen::Success) throw std::domain_error("simulate_pattern: singular measurement covariance");
    const Mat Z = Y.solve(C);  // Y^-1 C
    const Mat cond = sig - K * Y.solve(K.transpose());
    const Vec m2 = mean - K * (Z * mean);

    std::vector<int> sel;
    for (const auto& d : pattern.outputs) sel.push_back(lat.index(d));
    const int ko = static_cast<int>(sel.size());
    std::vector<int> idx(2 * ko), in(2 * k);
    for (int a = 0; a < ko; ++a) idx[a] = sel[a], idx[ko + a] = n + sel[a];
    for (int a = 0; a < k; ++a) in[a] = ports[a], in[k + a] = n + ports[a];

    PatternResult res{{Vec(2 * ko), Mat(2 * ko, 2 * ko)}, Mat(2 * ko, 2 * k)};
    const Mat KZ = K * Z;
    for (int a = 0; a < 2 * ko; ++a) {
        res.output.mean(a) = m2(idx[a]);
        for (int b = 0; b < 2 * ko; ++b) res.output.cov(a, b) = cond(idx[a], idx[b]);
        for (int b = 0; b < 2 * k; ++b) res.gain(a, b) = (idx[a] == in[b] ? 1.0 : 0.0) - KZ(idx[a], in[b]);
    }
    return res;
}

WirePattern random_wire_pattern(const Lattice& lat, std::mt19937_64& rng, int wires)
{
    if (wires < 1) throw std::invalid_argument("wires must be >= 1");
    const auto& g = lat.graph();
    std::vector<MacronodeId> reds;
    for (const auto& id : lat.macronodes())
        if (is_red(id) && id.t == 1 && std::abs(id.l) <= 9) reds.push_back(id);
    if (reds.empty()) throw std::invalid_argument("random_wire_pattern: graph too small");

    std::uniform_int_distribution<std::size_t> pick(0, reds.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1), nsteps(1, 2);
    std::uniform_real_distribution<double> a0(0.0, pi), gap(pi / 3, 2 * pi / 3);
    const int sig1 = coin(rng) ? 1 : -1;

    WirePattern wp;
    std::set<MacronodeId> used;
    std::vector<std::vector<DistributedMode>> chains;
    for (int w = 0; w < wires; ++w) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 1000) throw std::runtime_error("random_wire_pattern: no room for another wire");
            DistributedMode key{reds[pick(rng)], coin(rng) ? 0 : 2};
            const int steps = nsteps(rng);
            std::vector<DistributedMode> ch{key};
            bool ok = true;
            try {
                for (int s = 0; s < steps; ++s) ch.push_back(key = lat.next_holder(key));
            } catch (const std::out_of_range&) {
                ok = false;
            }
            std::set<MacronodeId> macs;
            for (const auto& d : ch) macs.insert(d.node);
            for (const auto& m : macs) ok = ok && !used.count(m);
            if (!ok || macs.size() != ch.size()) continue;
            used.insert(macs.begin(), macs.end());
            chains.push_back(ch);
            wp.steps.push_back(steps);
            break;
        }
    }

    auto& p = wp.pattern;
    for (const auto& lab : g.labels)
        if (!class_plus(lab.l) && (lab.t == 1 || lab.t == 2)) {
            const int sign = lab.t == 1 ? sig1 : -sig1;
            p.angles[lab] = sign * pi / 4;
            p.region[{lab.l, lab.t}] = sign;
        }
    std::vector<SymplecticGate> per;
    for (const auto& ch : chains) {
        Mat2 s = Mat2::Identity();
        for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
            const double a = a0(rng), b = a + gap(rng);
            for (char arm : std::string("abcd")) {
                const ModeLabel lab{arm, ch[i].node.l, ch[i].node.t};
                if (g.find(lab)) p.angles[lab] = (arm == 'a' || arm == 'c') ? a : b;
            }
            // red region is opposite to the grey sign of its slot
            s = single_mode_step(a, b, -sig1).alpha * s;
        }
        per.push_back({s, Vec::Zero(2)});
        p.inputs.push_back(ch.front());
        p.outputs.push_back(ch.back());
    }
    // direct_sum orders (q1, q2.., p1, p2..)
    wp.compiled = direct_sum(per);
    return wp;
}

int LogicalRegistry::open(const DistributedMode& holder)
{
    if (owner_.count(holder)) throw std::invalid_argument("holder " + holder.str() + " already carries a wire");
    hist_.push_back({holder});
    owner_[holder] = wires() - 1;
    return wires() - 1;
}

void LogicalRegistry::move(int wire, const DistributedMode& holder)
{
    if (wire < 0 || wire >= wires()) throw std::out_of_range("unknown wire");
    if (owner_.count(holder)) throw std::invalid_argument("holder " + holder.str() + " already carries a wire");
    owner_.erase(hist_[wire].back());
    hist_[wire].push_back(holder);
    owner_[holder] = wire;
}

const DistributedMode& LogicalRegistry::where(int wire) const { return history(wire).back(); }

const std::vector<DistributedMode>& LogicalRegistry::history(int wire) const
{
    if (wire < 0 || wire >= wires()) throw std::out_of_range("unknown wire");
    return hist_[wire];
}

ConvergenceFit fit_convergence(const std::vector<double>& r, const std::vector<double>& err)
{
    if (r.size() != err.size() || r.size() < 2) throw std::invalid_argument("fit_convergence: need >= 2 points");
    double mr = 0, me = 0;
    for (std::size_t i = 0; i < r.size(); ++i) mr += r[i], me += std::log(err[i]);
    mr /= r.size(), me /= r.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        num += (r[i] - mr) * (std::log(err[i]) - me);
        den += (r[i] - mr) * (r[i] - mr);
    }
    return {r, err, num / den};
}

}  // namespace cvchip
