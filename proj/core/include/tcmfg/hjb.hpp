#pragma once

#include <cstddef>
#include <vector>

#include "tcmfg/grid.hpp"
#include "tcmfg/hamiltonian.hpp"
#include "tcmfg/levy.hpp"
#include "tcmfg/report.hpp"
#include "tcmfg/stencil.hpp"

namespace tcmfg {

struct HjbOptions {
    std::size_t min_substeps = 1;          // substeps per time interval at least this many
    std::size_t max_substeps = 10000000;   // larger requirements raise InstabilityError
    double blowup_slack = 1e-9;            // relative slack on the sup-norm bound
};

/// Backward trajectory u(t_n), n = 0..M, with cached L u(t_n).
struct ValueTrajectory {
    GridSpec grid;
    std::vector<GridFunction> u;
    std::vector<GridFunction> Lu;
    std::vector<std::size_t> substeps; // per interval [t_n, t_{n+1}]
    double dt = 0.0;
};

/// Running cost either time-indexed (M + 1 slices) or constant in time (one slice).
using SourceTerm = std::vector<GridFunction>;

/// Explicit backward Euler for -u_t = F(L u) + f with u(T) = g, substepped so that
/// tau * sup F'(L u) * (stencil mass) <= 1.
ValueTrajectory solve_hjb(const GridFunction& g, const SourceTerm& f, const Hamiltonian& hamiltonian,
                          const DiscreteLevyOp& op, const HjbOptions& options = {});

/// Feedback b = F'(L u) on every slice.
struct ControlField {
    GridSpec grid;
    std::vector<GridFunction> b;
    double min = 0.0;
    double max = 0.0;
};

ControlField control_field(const ValueTrajectory& traj, const Hamiltonian& hamiltonian);
/// Control field constant in space and time.
ControlField constant_control(const GridSpec& grid, double value);

/// Terminal and running data of one HJB solve.
struct HjbData {
    SourceTerm f;
    GridFunction g;
};

/// Rows ||u1(t) - u2(t)|| <= (T - t) ||f1 - f2|| + ||g1 - g2|| + tolerance per slice.
std::vector<CheckRow> comparison_check(const ValueTrajectory& traj1, const ValueTrajectory& traj2,
                                       const HjbData& data1, const HjbData& data2, double tolerance);

struct HolderReportInput {
    double alpha = 1.0;       // Holder exponent of the data
    double bound = 1.0;       // data bound M
    double two_sigma = 0.0;   // order of the operator
    double la_constant = 0.0; // K
    double tail_mass = 0.0;   // mass of the jump measure outside the unit ball
    double tolerance = 0.0;
};

/// Per slice: max(||u||, [u]_alpha) against M (T - t + 1) and ||L u||_{alpha - 2 sigma}
/// against 4 (K / (alpha - 2 sigma) + tail) M (T - t + 1).
std::vector<CheckRow> holder_report(const ValueTrajectory& traj, const HolderReportInput& input);

/// Sup norm of f over all slices.
double source_sup(const SourceTerm& f);

} // namespace tcmfg
