#include "tcmfg/fp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "tcmfg/error.hpp"
#include "tcmfg/parallel.hpp"

namespace tcmfg {

namespace {

std::string slice_label(const GridSpec& grid, std::size_t n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t=%.6g", grid.time(n));
    return buf;
}

void check_control(const ControlField& b, const DiscreteLevyOp& op) {
    const GridSpec& grid = op.grid();
    if (!(b.grid == grid)) throw InvalidArgument("control field and operator live on different grids");
    if (b.b.size() < grid.steps) throw InvalidArgument("control field needs at least M slices");
    if (!(b.min >= 0.0)) throw InvalidArgument("control field must be nonnegative");
}

} // namespace

std::size_t fp_substeps(const GridFunction& b, const DiscreteLevyOp& op, double dt, std::size_t min_substeps) {
    const double need = std::ceil(dt * b.max() * op.total_mass() * (1.0 - 1e-12));
    return std::max<std::size_t>(std::max<std::size_t>(min_substeps, 1), static_cast<std::size_t>(std::max(need, 1.0)));
}

MeasureTrajectory solve_fp(const ProbabilityVector& m0, const ControlField& b, const DiscreteLevyOp& op,
                           const FpOptions& options) {
    const GridSpec& grid = op.grid();
    if (!(m0.grid() == grid)) throw InvalidArgument("initial measure and operator live on different grids");
    check_control(b, op);
    const DiscreteLevyOp transpose = adjoint(op);
    const double mass = op.total_mass();
    const double dt = grid.dt();
    const std::size_t size = grid.size();

    MeasureTrajectory traj;
    traj.grid = grid;
    traj.dt = dt;
    traj.m.reserve(grid.steps + 1);
    traj.m.push_back(m0);
    traj.substeps.assign(grid.steps, 0);
    traj.max_mass_drift = std::abs(m0.total() - 1.0);
    traj.min_mass = m0.min();

    std::vector<double> cur(m0.masses().begin(), m0.masses().end());
    std::vector<double> flux(size), inflow(size);
    for (std::size_t n = 0; n < grid.steps; ++n) {
        const GridFunction& rate = b.b[n];
        const std::size_t pieces = fp_substeps(rate, op, dt, options.min_substeps);
        if (pieces > options.max_substeps)
            throw CflViolation("FP step at t = " + std::to_string(grid.time(n)) + " needs " + std::to_string(pieces) +
                               " substeps, above the cap " + std::to_string(options.max_substeps));
        const double tau = dt / static_cast<double>(pieces);
        for (std::size_t s = 0; s < pieces; ++s) {
            for (std::size_t k = 0; k < size; ++k) flux[k] = rate[k] * cur[k];
            transpose.gather(flux, inflow);
            parallel_for(size, [&](std::size_t begin, std::size_t end) {
                for (std::size_t k = begin; k < end; ++k)
                    cur[k] = cur[k] * (1.0 - tau * mass * rate[k]) + tau * inflow[k];
            });
        }
        traj.substeps[n] = pieces;
        ProbabilityVector next = ProbabilityVector::unchecked(grid, cur);
        const double drift = std::abs(next.total() - 1.0);
        const double low = next.min();
        if (low < -options.negativity_tolerance)
            throw CflViolation("negative mass " + std::to_string(low) + " at t = " + std::to_string(grid.time(n + 1)));
        if (drift > options.mass_tolerance)
            throw ConservationFault("mass drift " + std::to_string(drift) + " at t = " +
                                    std::to_string(grid.time(n + 1)));
        traj.max_mass_drift = std::max(traj.max_mass_drift, drift);
        traj.min_mass = std::min(traj.min_mass, low);
        traj.m.push_back(std::move(next));
    }
    return traj;
}

DualTrajectory solve_dual(const GridFunction& phi, const ControlField& b, const DiscreteLevyOp& op,
                          std::size_t end_index, const FpOptions& options) {
    const GridSpec& grid = op.grid();
    if (!(phi.grid() == grid)) throw InvalidArgument("test function and operator live on different grids");
    check_control(b, op);
    if (end_index > grid.steps) throw InvalidArgument("dual end index exceeds the number of time steps");
    const double mass = op.total_mass();
    const double dt = grid.dt();
    const std::size_t size = grid.size();

    DualTrajectory dual;
    dual.grid = grid;
    dual.end_index = end_index;
    dual.w.assign(end_index + 1, GridFunction());
    dual.w[end_index] = phi;
    std::vector<double> cur(phi.values().begin(), phi.values().end());
    std::vector<double> jumps(size);
    for (std::size_t n = end_index; n-- > 0;) {
        const GridFunction& rate = b.b[n];
        const std::size_t pieces = fp_substeps(rate, op, dt, options.min_substeps);
        if (pieces > options.max_substeps)
            throw CflViolation("dual step at t = " + std::to_string(grid.time(n)) + " needs " +
                               std::to_string(pieces) + " substeps");
        const double tau = dt / static_cast<double>(pieces);
        for (std::size_t s = 0; s < pieces; ++s) {
            op.gather(cur, jumps);
            parallel_for(size, [&](std::size_t begin, std::size_t end) {
                for (std::size_t k = begin; k < end; ++k)
                    cur[k] = cur[k] * (1.0 - tau * mass * rate[k]) + tau * rate[k] * jumps[k];
            });
        }
        dual.w[n] = GridFunction(grid, cur);
    }
    return dual;
}

HolmgrenResult holmgren_residual(const MeasureTrajectory& traj1, const MeasureTrajectory& traj2, const ControlField& b,
                                 const DiscreteLevyOp& op, const std::vector<GridFunction>& family,
                                 std::size_t end_index, const FpOptions& options) {
    if (end_index >= traj1.m.size() || end_index >= traj2.m.size())
        throw InvalidArgument("Holmgren end index outside the trajectories");
    HolmgrenResult result;
    for (const GridFunction& phi : family) {
        const DualTrajectory dual = solve_dual(phi, b, op, end_index, options);
        const GridFunction& w0 = dual.w.front();
        const double end1 = traj1.m[end_index].integrate(phi);
        const double end2 = traj2.m[end_index].integrate(phi);
        const double start1 = traj1.m.front().integrate(w0);
        const double start2 = traj2.m.front().integrate(w0);
        result.residual.push_back(std::abs(end1 - end2));
        result.initial_gap.push_back(std::abs(start1 - start2));
        result.duality_drift.push_back(std::max(std::abs(end1 - start1), std::abs(end2 - start2)));
        result.max_residual = std::max(result.max_residual, result.residual.back());
    }
    return result;
}

std::vector<CheckRow> mass_report(const MeasureTrajectory& traj, double mass_bound, double negativity_bound) {
    std::vector<CheckRow> rows;
    for (std::size_t n = 0; n < traj.m.size(); ++n) {
        const auto label = slice_label(traj.grid, n);
        rows.push_back(upper_check("mass", label, mass_bound, std::abs(traj.m[n].total() - 1.0),
                                   "mass conservation of the Fokker-Planck flow"));
        rows.push_back(upper_check("positivity", label, negativity_bound, std::max(0.0, -traj.m[n].min()),
                                   "positivity of the Fokker-Planck flow"));
    }
    return rows;
}

std::vector<CheckRow> tightness_report(const MeasureTrajectory& traj, const ControlField& b, const DiscreteLevyOp& op,
                                       const LyapunovFn& v, double tolerance) {
    const GridFunction field = v.sample(traj.grid);
    const double generator = op.apply(field).sup_norm();
    const double start = traj.m.front().integrate(field);
    std::vector<CheckRow> rows;
    for (std::size_t n = 0; n < traj.m.size(); ++n) {
        const double bound = start + traj.grid.time(n) * b.max * generator + tolerance;
        rows.push_back(upper_check("tightness", slice_label(traj.grid, n), bound, traj.m[n].integrate(field),
                                   "Lyapunov moment bound"));
    }
    return rows;
}

} // namespace tcmfg
