#pragma once

#include <cstddef>
#include <vector>

#include "tcmfg/grid.hpp"

namespace tcmfg {

struct D0Result {
    double value = 0.0;             // optimal transport cost (primal)
    double dual_value = 0.0;        // (mu - nu)[psi] for the recovered test function
    std::vector<double> potential;  // optimal psi with |psi| <= 1 and neighbour differences <= h
    std::size_t augmentations = 0;
};

/// Bounded-Lipschitz distance sup{(mu - nu)[psi] : |psi| <= 1, |psi(x) - psi(y)| <= h for grid
/// neighbours}, solved as a min-cost flow on the neighbour graph plus a hub reachable at cost 1.
D0Result d0_solve(const ProbabilityVector& mu, const ProbabilityVector& nu);
double d0_distance(const ProbabilityVector& mu, const ProbabilityVector& nu);

/// Independent 1D solver: dynamic program over the lattice of attainable test-function levels.
double d0_distance_levels(const ProbabilityVector& mu, const ProbabilityVector& nu);

/// sup_n d0(a[n], b[n]).
double d0_sup(const std::vector<ProbabilityVector>& a, const std::vector<ProbabilityVector>& b);

} // namespace tcmfg
