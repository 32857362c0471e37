#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

struct SuiteResult {
    std::string name;
    int samples = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Seeded checks of the identities the action and the holography rest on.
SuiteResult schwarzian_cocycle(std::uint64_t seed);       // S(f o g) = S(f)(g) g'^2 + S(g), relative
SuiteResult schwarzian_of_moebius(std::uint64_t seed);    // S(m) = 0
SuiteResult jacobian_multiplicativity(std::uint64_t seed);
SuiteResult theta_coboundary(std::uint64_t seed);         // g1.theta_g2 - theta_g1g2 + theta_g1 = u, checked forms
SuiteResult u_closed(std::uint64_t seed);                 // loop integrals of u-check
SuiteResult w2_coboundary(std::uint64_t seed);            // against derivatives of the 3D action
SuiteResult hyperbolic_automorphy(std::uint64_t seed);
SuiteResult epstein_equivariance(std::uint64_t seed);
SuiteResult kappa_pairing();                              // <kappa, L> / 4 pi i = 2 - 2g, g = 2, 3
SuiteResult chain_ledgers();                              // symbolic boundary identities; residual counts failures

std::vector<SuiteResult> identity_suites(std::uint64_t seed);

}  // namespace cli
