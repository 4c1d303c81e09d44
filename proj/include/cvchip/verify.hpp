#pragma once

#include <string>
#include <vector>

namespace cvchip {

struct Check {
    std::string name;
    double value;  // measured deviation or quantity
    double tol;
    bool pass;
    std::string detail;
};

bool all_pass(const std::vector<Check>& checks);

// exact phase-space identities of the compiler, tolerance 1e-12
std::vector<Check> verify_identities(unsigned seed = 11);
// per preset: e^{-2r} scaling of every nullifier over r in {0.5, 1, 2}, C bookkeeping
std::vector<Check> verify_nullifiers(int l_max = 9, int t_max = 3);

}  // namespace cvchip
