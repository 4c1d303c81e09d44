#include "cvchip/verify.hpp"

#include "cvchip/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace cvchip {

using std::numbers::pi;

bool all_pass(const std::vector<Check>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

constexpr double exact = 1e-12;

Check below(std::string name, double v, double tol = exact, std::string detail = {})
{
    return {std::move(name), v, tol, v < tol, std::move(detail)};
}

}  // namespace

std::vector<Check> verify_identities(unsigned seed)
{
    std::vector<Check> out;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2 * pi);

    const SymplecticGate A = passive(foursplitter_annihilation());
    out.push_back(below("foursplitter = B01 B23 B02 B13", (foursplitter_matrix(0, 1, 2, 3, 4).S - A.S).cwiseAbs().maxCoeff()));

    for (int c = 0; c < 2; ++c) {
        const auto g = gymnastics_check(c);
        const std::string tag = "gymnastics[" + std::to_string(c) + "] ";
        out.push_back(below(tag + "core", g.core));
        out.push_back(below(tag + "insert", g.insert));
        out.push_back(below(tag + "exchange", g.exchange));
        out.push_back(below(tag + "partner", g.partner));
    }

    {
        std::array<int, 4> p{0, 1, 2, 3};
        double worst = 0;
        int n = 0;
        do {
            try {
                const auto m = permute_measurement(p, {ang(rng), ang(rng), ang(rng), ang(rng)});
                worst = std::max(worst, m.deviation);
                ++n;
            } catch (const std::logic_error&) {
                // A P A^T not a signed permutation for this P
            }
        } while (std::next_permutation(p.begin(), p.end()));
        out.push_back(below("permuted measurement", worst, exact, std::to_string(n) + " permutations"));
    }

    const auto f = measurement_factorization_check(200, seed);
    out.push_back(below("factorization B_jk", f.bjk, exact, "200 random states"));
    out.push_back(below("factorization foursplitter", f.foursplitter, exact, "200 random states"));
    out.push_back(below("factorization partial", f.partial, exact, "200 random states"));
    out.push_back({"factorization control (unequal angles)", f.control, 1e-3, f.control > 1e-3, "must not factorize"});

    for (int w = 1; w <= 3; ++w) {
        double worst = 0;
        for (int k = 0; k < 20; ++k) {
            WAngles th;
            for (int m = 0; m < 4; ++m) th.Ra[m] = ang(rng), th.Rb[m] = th.Ra[m] + 0.5 + ang(rng) / 4, th.I[m] = ang(rng);
            for (int region : {1, -1}) worst = std::max(worst, check_w_restriction(w, th, region).deviation);
        }
        out.push_back(below("W restriction " + std::to_string(w), worst, exact, "20 angle sets, both regions"));
    }

    {
        std::uniform_real_distribution<double> phi(0.05, pi - 0.05);
        double worst = 0;
        for (int k = 0; k < 100; ++k)
            for (int s : {1, -1}) worst = std::max(worst, g_to_cz(phi(rng), s).deviation);
        out.push_back(below("G -> C_Z(2 cot phi)", worst, exact, "100 random phi, both signs"));
    }
    return out;
}

std::vector<Check> verify_nullifiers(int l_max, int t_max)
{
    std::vector<Check> out;
    const std::vector<double> rs{0.5, 1.0, 2.0};
    for (const auto& name : preset_names()) {
        ChipProgram prog = preset(name);
        prog.l_max = l_max;
        prog.t_max = t_max;
        const ClusterGraph g = build(prog);
        const auto nulls = nullifiers(g);
        const int n = g.modes();

        std::vector<std::vector<double>> var(nulls.size() * 2);
        for (double r : rs) {
            const GaussianState s = graph_to_covariance(g.with_squeezing(r).graph.expand());
            for (std::size_t i = 0; i < nulls.size(); ++i) {
                var[2 * i].push_back(nullifier_variance(s, q_vector(nulls[i], n)));
                var[2 * i + 1].push_back(nullifier_variance(s, p_vector(nulls[i], n)));
            }
        }
        double worst = 0;
        for (const auto& v : var) worst = std::max(worst, std::abs(fit_convergence(rs, v).slope + 2.0));
        out.push_back(below(name + " nullifier slope", worst, 0.01, std::to_string(2 * nulls.size()) + " nullifiers"));

        const double want = preset_C(name);
        out.push_back(below(name + " final C", std::abs(g.final_C() - want), exact));
        out.push_back(below(name + " interior |E|", std::abs(interior_edge_magnitude(g) - want), exact));
    }
    return out;
}

}  // namespace cvchip
