#pragma once

#include <cstddef>
#include <vector>

#include "tcmfg/grid.hpp"
#include "tcmfg/hjb.hpp"
#include "tcmfg/lyapunov.hpp"
#include "tcmfg/report.hpp"
#include "tcmfg/stencil.hpp"

namespace tcmfg {

struct FpOptions {
    std::size_t min_substeps = 1;         // substeps per interval at least this many
    std::size_t max_substeps = 10000000;
    double mass_tolerance = 1e-10;        // |sum m - 1| beyond this raises ConservationFault
    double negativity_tolerance = 1e-14;  // min m below minus this raises CflViolation
};

struct MeasureTrajectory {
    GridSpec grid;
    std::vector<ProbabilityVector> m;
    std::vector<std::size_t> substeps; // per interval [t_n, t_{n+1}]
    double dt = 0.0;
    double max_mass_drift = 0.0;       // max_n |sum m(t_n) - 1|
    double min_mass = 0.0;             // min over all slices and nodes
};

/// Substep count used on [t_n, t_{n+1}] for the control slice b.
std::size_t fp_substeps(const GridFunction& b, const DiscreteLevyOp& op, double dt, std::size_t min_substeps);

/// Forward Euler m <- m + tau L*(b m) with b frozen at b(t_n) on [t_n, t_{n+1}).
MeasureTrajectory solve_fp(const ProbabilityVector& m0, const ControlField& b, const DiscreteLevyOp& op,
                           const FpOptions& options = {});

struct DualTrajectory {
    GridSpec grid;
    std::vector<GridFunction> w; // slices 0..end_index, w[end_index] = phi
    std::size_t end_index = 0;
};

/// Backward Euler for w_t + b L w = 0 on [0, t_{end_index}] with w(t_{end_index}) = phi,
/// using the same substep counts as solve_fp so the pairing <m, w> is preserved exactly.
DualTrajectory solve_dual(const GridFunction& phi, const ControlField& b, const DiscreteLevyOp& op,
                          std::size_t end_index, const FpOptions& options = {});

struct HolmgrenResult {
    std::vector<double> residual;      // |(m1 - m2)(t0)[phi]| per test function
    std::vector<double> initial_gap;   // |(m1 - m2)(0)[w(0)]| per test function
    std::vector<double> duality_drift; // max_i |m_i(t0)[phi] - m_i(0)[w(0)]| per test function
    double max_residual = 0.0;
};

/// Tests two measure flows against backward dual solutions started from each phi at t_{end_index}.
HolmgrenResult holmgren_residual(const MeasureTrajectory& traj1, const MeasureTrajectory& traj2, const ControlField& b,
                                 const DiscreteLevyOp& op, const std::vector<GridFunction>& family,
                                 std::size_t end_index, const FpOptions& options = {});

/// Rows for |sum m - 1| <= mass bound and min m >= -negativity bound on every slice.
std::vector<CheckRow> mass_report(const MeasureTrajectory& traj, double mass_bound = 1e-10,
                                  double negativity_bound = 1e-14);

/// Rows m(t)[V] <= m0[V] + t ||b|| ||L V|| + tolerance.
std::vector<CheckRow> tightness_report(const MeasureTrajectory& traj, const ControlField& b, const DiscreteLevyOp& op,
                                       const LyapunovFn& v, double tolerance);

} // namespace tcmfg
