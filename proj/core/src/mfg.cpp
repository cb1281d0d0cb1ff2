#include "tcmfg/mfg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcmfg/error.hpp"
#include "tcmfg/metric.hpp"

namespace tcmfg {

std::vector<ProbabilityVector> constant_trajectory(const ProbabilityVector& m, std::size_t steps) {
    return std::vector<ProbabilityVector>(steps + 1, m);
}

BestResponse best_response(const MfgProblem& problem, const std::vector<ProbabilityVector>& m,
                           const MfgOptions& options) {
    const GridSpec& grid = problem.op.grid();
    if (m.size() != grid.steps + 1) throw InvalidArgument("measure trajectory must have M + 1 slices");
    SourceTerm f;
    if (!problem.running.is_zero()) {
        f.reserve(m.size());
        for (const auto& slice : m) f.push_back(problem.running(slice));
    }
    const GridFunction g = problem.terminal.is_zero() ? GridFunction(grid) : problem.terminal(m.back());
    BestResponse r;
    r.u = solve_hjb(g, f, problem.hamiltonian, problem.op, options.hjb);
    r.b = control_field(r.u, problem.hamiltonian);
    r.m = solve_fp(problem.m0, r.b, problem.op, options.fp);
    return r;
}

MfgSolution solve_mfg(const MfgProblem& problem, const std::vector<ProbabilityVector>& initial,
                      const MfgOptions& options) {
    if (!(options.damping > 0.0 && options.damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
    if (!(options.damping_floor > 0.0 && options.damping_floor <= options.damping))
        throw InvalidArgument("damping floor must lie in (0, damping]");
    MfgSolution sol;
    std::vector<ProbabilityVector> current = initial;
    double lambda = options.damping;
    double previous = std::numeric_limits<double>::infinity();
    const bool uncoupled = problem.running.is_zero() && problem.terminal.is_zero();
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        BestResponse r = best_response(problem, current, options);
        // Without coupling the best response does not depend on the input, so it is a fixed point.
        const double residual = uncoupled ? 0.0 : d0_sup(r.m.m, current);
        sol.residual_history.push_back(residual);
        sol.iterations = it;
        sol.u = std::move(r.u);
        sol.b = std::move(r.b);
        sol.m = std::move(r.m);
        if (residual <= options.tolerance) {
            sol.converged = true;
            return sol;
        }
        if (residual > previous) lambda = std::max(0.5 * lambda, options.damping_floor);
        previous = residual;
        sol.damping_history.push_back(lambda);
        for (std::size_t n = 0; n < current.size(); ++n) current[n] = mix(current[n], sol.m.m[n], lambda);
    }
    return sol;
}

double fixed_point_defect(const MfgProblem& problem, const MfgSolution& solution, const MfgOptions& options) {
    const BestResponse r = best_response(problem, solution.m.m, options);
    return d0_sup(r.m.m, solution.m.m);
}

DualityReport duality_residual(const MfgProblem& problem, const MfgSolution& sol1, const MfgSolution& sol2) {
    const GridSpec& grid = problem.op.grid();
    const std::size_t steps = grid.steps;
    const double dt = grid.dt();
    const Hamiltonian& H = problem.hamiltonian;
    auto check = [&](const MfgSolution& s) {
        if (s.u.u.size() != steps + 1 || s.m.m.size() != steps + 1 || s.b.b.size() != steps + 1)
            throw InvalidArgument("duality residual needs complete trajectories on the problem grid");
    };
    check(sol1);
    check(sol2);
    const std::size_t size = grid.size();

    DualityReport rep;
    auto diff_pair = [&](std::size_t n, const GridFunction& w) {
        return sol1.m.m[n].integrate(w) - sol2.m.m[n].integrate(w);
    };
    const GridFunction uT = sol1.u.u[steps] - sol2.u.u[steps];
    const GridFunction u0 = sol1.u.u[0] - sol2.u.u[0];
    rep.lhs = diff_pair(steps, uT) - diff_pair(0, u0);

    double rhs = 0.0;
    double convexity = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < steps; ++n) {
        const GridFunction du = (sol1.u.u[n + 1] - sol2.u.u[n + 1]) - (sol1.u.u[n] - sol2.u.u[n]);
        const GridFunction& v1 = sol1.u.Lu[n];
        const GridFunction& v2 = sol2.u.Lu[n];
        double term = 0.0;
        for (std::size_t k = 0; k < size; ++k) {
            const double v = v1[k] - v2[k];
            term += sol1.m.m[n][k] * (du[k] + dt * sol1.b.b[n][k] * v) - sol2.m.m[n][k] * (du[k] + dt * sol2.b.b[n][k] * v);
        }
        rhs += term;
    }
    for (std::size_t n = 0; n <= steps; ++n) {
        const GridFunction& v1 = sol1.u.Lu[n];
        const GridFunction& v2 = sol2.u.Lu[n];
        for (std::size_t k = 0; k < size; ++k) {
            const double a = v1[k], b = v2[k];
            convexity = std::min(convexity, H.value(a) - H.value(b) - H.derivative(b) * (a - b));
            convexity = std::min(convexity, H.value(b) - H.value(a) - H.derivative(a) * (b - a));
        }
    }
    rep.rhs = rhs;
    rep.gap = std::abs(rep.lhs - rep.rhs);
    rep.convexity_gap = convexity;

    if (!problem.terminal.is_zero())
        rep.terminal_pairing = monotonicity_pairing(problem.terminal, sol1.m.m[steps], sol2.m.m[steps]);
    if (!problem.running.is_zero()) {
        rep.running_pairing = -std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n <= steps; ++n)
            rep.running_pairing =
                std::max(rep.running_pairing, monotonicity_pairing(problem.running, sol1.m.m[n], sol2.m.m[n]));
    }
    return rep;
}

} // namespace tcmfg
