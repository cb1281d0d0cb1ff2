#include "tcmfg/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "tcmfg/error.hpp"
#include "tcmfg/holder.hpp"
#include "tcmfg/parallel.hpp"

namespace tcmfg {

namespace {

std::string slice_label(const GridSpec& grid, std::size_t n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "t=%.6g", grid.time(n));
    return buf;
}

const GridFunction* source_slice(const SourceTerm& f, std::size_t n) {
    if (f.empty()) return nullptr;
    return f.size() == 1 ? &f.front() : &f[n];
}

double sup_difference(const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::abs(a[k] - b[k]));
    return s;
}

void check_source(const SourceTerm& f, const GridSpec& grid) {
    if (!f.empty() && f.size() != 1 && f.size() != grid.steps + 1)
        throw InvalidArgument("running cost must have 1 or M + 1 = " + std::to_string(grid.steps + 1) +
                              " slices, got " + std::to_string(f.size()));
    for (const auto& s : f)
        if (!(s.grid() == grid)) throw InvalidArgument("running cost lives on a different grid");
}

} // namespace

double source_sup(const SourceTerm& f) {
    double s = 0.0;
    for (const auto& slice : f) s = std::max(s, slice.sup_norm());
    return s;
}

ValueTrajectory solve_hjb(const GridFunction& g, const SourceTerm& f, const Hamiltonian& hamiltonian,
                          const DiscreteLevyOp& op, const HjbOptions& options) {
    const GridSpec& grid = g.grid();
    grid.validate();
    if (!(op.grid() == grid)) throw InvalidArgument("operator and terminal data live on different grids");
    if (!hamiltonian.differentiable())
        throw InvalidArgument("HJB solver requires a differentiable Hamiltonian, got " + hamiltonian.name());
    if (!g.all_finite()) throw InvalidArgument("terminal data is not finite");
    check_source(f, grid);

    const std::size_t steps = grid.steps;
    const double dt = grid.dt();
    const double mass = op.total_mass();
    const double terminal_sup = g.sup_norm();
    const double rate = source_sup(f) + std::abs(hamiltonian.value(0.0));

    ValueTrajectory traj;
    traj.grid = grid;
    traj.dt = dt;
    traj.u.assign(steps + 1, GridFunction());
    traj.Lu.assign(steps + 1, GridFunction());
    traj.substeps.assign(steps, 0);
    traj.u[steps] = g;
    traj.Lu[steps] = op.apply(g);

    auto required = [&](const GridFunction& lu, double span) {
        const double slope = hamiltonian.derivative_bound(lu.max());
        return static_cast<std::size_t>(std::max(1.0, std::ceil(span * slope * mass * (1.0 - 1e-12))));
    };

    for (std::size_t n = steps; n-- > 0;) {
        GridFunction cur = traj.u[n + 1];
        GridFunction lcur = traj.Lu[n + 1];
        const GridFunction* fs = source_slice(f, n + 1);
        std::size_t pieces = std::max(options.min_substeps, required(lcur, dt));
        double remaining = dt;
        std::size_t taken = 0;
        while (pieces > 0) {
            if (taken + pieces > options.max_substeps)
                throw InstabilityError("HJB step at t = " + std::to_string(grid.time(n)) + " needs more than " +
                                       std::to_string(options.max_substeps) + " substeps");
            const double tau = remaining / static_cast<double>(pieces);
            parallel_for(cur.size(), [&](std::size_t begin, std::size_t end) {
                for (std::size_t k = begin; k < end; ++k)
                    cur[k] += tau * (hamiltonian.value(lcur[k]) + (fs ? (*fs)[k] : 0.0));
            });
            lcur = op.apply(cur);
            remaining -= tau;
            --pieces;
            ++taken;
            if (pieces > 0) pieces = std::max(pieces, required(lcur, remaining));
        }
        traj.substeps[n] = taken;

        const double bound = terminal_sup + (grid.horizon - grid.time(n)) * rate;
        const double sup = cur.sup_norm();
        if (!cur.all_finite() || sup > bound * (1.0 + options.blowup_slack) + options.blowup_slack)
            throw InstabilityError("HJB blow-up at t = " + std::to_string(grid.time(n)) + ": ||u||_inf = " +
                                   std::to_string(sup) + " exceeds ||g||_inf + (T - t)(||f||_inf + |F(0)|) = " +
                                   std::to_string(bound));
        traj.u[n] = std::move(cur);
        traj.Lu[n] = std::move(lcur);
    }
    return traj;
}

ControlField control_field(const ValueTrajectory& traj, const Hamiltonian& hamiltonian) {
    ControlField field;
    field.grid = traj.grid;
    field.b.reserve(traj.Lu.size());
    field.min = std::numeric_limits<double>::infinity();
    field.max = -std::numeric_limits<double>::infinity();
    for (const GridFunction& lu : traj.Lu) {
        GridFunction b(traj.grid);
        for (std::size_t k = 0; k < b.size(); ++k) b[k] = hamiltonian.derivative(lu[k]);
        field.min = std::min(field.min, b.min());
        field.max = std::max(field.max, b.max());
        field.b.push_back(std::move(b));
    }
    return field;
}

ControlField constant_control(const GridSpec& grid, double value) {
    if (!(value >= 0.0)) throw InvalidArgument("control must be nonnegative");
    ControlField field;
    field.grid = grid;
    field.b.assign(grid.steps + 1, GridFunction(grid, value));
    field.min = value;
    field.max = value;
    return field;
}

std::vector<CheckRow> comparison_check(const ValueTrajectory& traj1, const ValueTrajectory& traj2,
                                       const HjbData& data1, const HjbData& data2, double tolerance) {
    if (!(traj1.grid == traj2.grid)) throw InvalidArgument("trajectories live on different grids");
    const GridSpec& grid = traj1.grid;
    double source_gap = 0.0;
    const std::size_t slices = std::max(data1.f.size(), data2.f.size());
    for (std::size_t n = 0; n < slices; ++n) {
        const GridFunction* a = source_slice(data1.f, std::min(n, data1.f.empty() ? 0 : data1.f.size() - 1));
        const GridFunction* b = source_slice(data2.f, std::min(n, data2.f.empty() ? 0 : data2.f.size() - 1));
        if (a && b) source_gap = std::max(source_gap, sup_difference(*a, *b));
        else if (a) source_gap = std::max(source_gap, a->sup_norm());
        else if (b) source_gap = std::max(source_gap, b->sup_norm());
    }
    const double terminal_gap = sup_difference(data1.g, data2.g);
    std::vector<CheckRow> rows;
    for (std::size_t n = 0; n < traj1.u.size(); ++n) {
        const double bound = (grid.horizon - grid.time(n)) * source_gap + terminal_gap + tolerance;
        rows.push_back(upper_check("comparison", slice_label(grid, n), bound, sup_difference(traj1.u[n], traj2.u[n]),
                                   "comparison principle for bounded classical HJB solutions"));
    }
    return rows;
}

std::vector<CheckRow> holder_report(const ValueTrajectory& traj, const HolderReportInput& input) {
    const double reduced = input.alpha - input.two_sigma;
    if (!(reduced > 0.0)) throw InvalidArgument("Holder report needs alpha > 2 sigma");
    const GridSpec& grid = traj.grid;
    const double lu_factor = 4.0 * (input.la_constant / reduced + input.tail_mass);
    std::vector<CheckRow> rows;
    for (std::size_t n = 0; n < traj.u.size(); ++n) {
        const double growth = input.bound * (grid.horizon - grid.time(n) + 1.0);
        const double u_measure = std::max(traj.u[n].sup_norm(), holder_seminorm(traj.u[n], input.alpha));
        rows.push_back(upper_check("holder_u", slice_label(grid, n), growth + input.tolerance, u_measure,
                                   "Holder bound on the value function"));
        rows.push_back(upper_check("holder_Lu", slice_label(grid, n), lu_factor * growth + input.tolerance,
                                   holder_norm(traj.Lu[n], reduced), "Holder bound on L applied to the value function"));
    }
    return rows;
}

} // namespace tcmfg
