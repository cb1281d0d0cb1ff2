#pragma once

#include <cstddef>
#include <vector>

#include "tcmfg/coupling.hpp"
#include "tcmfg/fp.hpp"
#include "tcmfg/hamiltonian.hpp"
#include "tcmfg/hjb.hpp"
#include "tcmfg/stencil.hpp"

namespace tcmfg {

/// Data of the coupled system: HJB backward with running cost running(m) and terminal cost
/// terminal(m(T)), FP forward from m0 driven by b = F'(L u).
struct MfgProblem {
    DiscreteLevyOp op;
    Hamiltonian hamiltonian;
    Coupling running;
    Coupling terminal;
    ProbabilityVector m0;
};

struct MfgOptions {
    double damping = 0.5;           // lambda in m <- (1 - lambda) m + lambda m~
    double damping_floor = 1.0 / 16.0;
    double tolerance = 1e-5;        // on sup_t d0(m~, m)
    std::size_t max_iterations = 200;
    HjbOptions hjb{};
    FpOptions fp{};
};

struct MfgSolution {
    ValueTrajectory u;
    MeasureTrajectory m;
    ControlField b;
    std::size_t iterations = 0;
    std::vector<double> residual_history; // sup_t d0(m~, m) before each update
    std::vector<double> damping_history;
    bool converged = false;
};

/// M + 1 copies of one measure.
std::vector<ProbabilityVector> constant_trajectory(const ProbabilityVector& m, std::size_t steps);

/// One best-response pass: HJB against the couplings of m, then FP from m0.
struct BestResponse {
    ValueTrajectory u;
    ControlField b;
    MeasureTrajectory m;
};
BestResponse best_response(const MfgProblem& problem, const std::vector<ProbabilityVector>& m,
                           const MfgOptions& options = {});

/// Damped Picard iteration started from the given measure trajectory (M + 1 slices).
/// A run that hits the iteration cap returns with converged = false.
MfgSolution solve_mfg(const MfgProblem& problem, const std::vector<ProbabilityVector>& initial,
                      const MfgOptions& options = {});

/// sup_t d0 between the solution's measure flow and one more best response to it.
double fixed_point_defect(const MfgProblem& problem, const MfgSolution& solution, const MfgOptions& options = {});

struct DualityReport {
    double lhs = 0.0;                 // (m1 - m2)(T)[u(T)] - (m1 - m2)(0)[u(0)], u = u1 - u2
    double rhs = 0.0;                 // time sum of m1[du/dt + b1 v] - m2[du/dt + b2 v], v = L u1 - L u2
    double gap = 0.0;                 // |lhs - rhs|
    double terminal_pairing = 0.0;    // sum (g(m1) - g(m2)) (m1 - m2)(T), <= 0 for monotone couplings
    double running_pairing = 0.0;     // max over slices of the running analogue
    double convexity_gap = 0.0;       // min of F(v1) - F(v2) - F'(v2)(v1 - v2) over both orders
};

DualityReport duality_residual(const MfgProblem& problem, const MfgSolution& sol1, const MfgSolution& sol2);

} // namespace tcmfg
