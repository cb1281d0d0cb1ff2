#include "tcmfg/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "tcmfg/error.hpp"
#include "tcmfg/grid_io.hpp"
#include "tcmfg/holder.hpp"
#include "tcmfg/lyapunov.hpp"
#include "tcmfg/metric.hpp"

namespace tcmfg {

namespace {

using Clock = std::chrono::steady_clock;

// FNV-1a of a canonical description, identifying the configuration in reports.
std::string describe(const Scenario& s) {
    std::ostringstream os;
    os << s.name << '|' << s.grid.dim << '|' << format_double(s.grid.half_width) << '|' << s.grid.points << '|'
       << format_double(s.grid.horizon) << '|' << s.grid.steps << '|' << format_double(s.epsilon) << '|'
       << static_cast<int>(s.approximation.compensator) << '|' << s.gain.name() << '|'
       << format_double(s.running.width) << '|' << format_double(s.running.strength) << '|'
       << format_double(s.terminal.width) << '|' << format_double(s.terminal.strength) << '|' << s.m0 << '|'
       << s.initial_guess << '|' << s.alternate_guess << '|' << format_double(s.solver.damping) << '|'
       << format_double(s.solver.tolerance) << '|' << s.solver.max_iterations << '|' << mode_name(s.mode) << '|'
       << s.seed << '|' << jump_order(s.triplet);
    for (const auto& c : s.checks) os << '|' << c;
    return os.str();
}

std::string config_hash(const Scenario& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : describe(s)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::vector<GridFunction> test_family(const GridSpec& grid) {
    const double wave = 2.0 * std::numbers::pi / grid.period();
    std::vector<GridFunction> family;
    for (int k = 1; k <= 2; ++k) {
        family.push_back(GridFunction::sample(grid, [&](double x, double) { return std::cos(k * wave * x); }));
        family.push_back(GridFunction::sample(grid, [&](double x, double) { return std::sin(k * wave * x); }));
    }
    family.push_back(GridFunction::sample(grid, [&](double x, double y) { return std::exp(-(x * x + y * y)); }));
    return family;
}

ProbabilityVector random_measure(const GridSpec& grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> w(grid.size());
    double total = 0.0;
    for (double& v : w) total += (v = dist(rng));
    for (double& v : w) v /= total;
    return ProbabilityVector::unchecked(grid, std::move(w));
}

struct Context {
    const Scenario& scenario;
    const MfgProblem& problem;
    std::optional<MfgSolution> solution;
    std::optional<MfgSolution> second;
    std::optional<ValueTrajectory> value;
    std::optional<HjbData> data;
    std::optional<ControlField> control;
    std::optional<MeasureTrajectory> measure;
    std::vector<DualTrajectory> duals;
};

void require(bool ok, const std::string& check, const std::string& what) {
    if (!ok) throw InvalidArgument("check '" + check + "' needs " + what);
}

void run_check(const std::string& name, Context& ctx, Report& report, std::ostream& log) {
    const Scenario& s = ctx.scenario;
    const MfgProblem& p = ctx.problem;
    const GridSpec& grid = s.grid;
    if (name == "mass") {
        require(ctx.measure.has_value(), name, "a Fokker-Planck trajectory (mode mfg or fp)");
        report.append(mass_report(*ctx.measure));
    } else if (name == "comparison") {
        require(ctx.value && ctx.data, name, "an HJB solve (mode mfg or hjb)");
        HjbData shifted = *ctx.data;
        if (shifted.f.empty()) shifted.f.push_back(GridFunction(grid));
        for (auto& slice : shifted.f) slice += 0.1;
        const ValueTrajectory other = solve_hjb(shifted.g, shifted.f, p.hamiltonian, p.op, s.solver.hjb);
        report.append(comparison_check(*ctx.value, other, *ctx.data, shifted, 1e-9));
    } else if (name == "holder") {
        require(ctx.value && ctx.data, name, "an HJB solve (mode mfg or hjb)");
        const double order = jump_order(s.triplet);
        require(std::isfinite(order) && order < 1.0, name, "a jump part of order below 1");
        double data_bound = holder_norm(ctx.data->g, 1.0);
        double source = 0.0;
        for (const auto& f : ctx.data->f) source = std::max(source, holder_norm(f, 1.0));
        data_bound += source;
        HolderReportInput in;
        in.alpha = 1.0;
        in.bound = std::max(data_bound, 1e-300);
        in.two_sigma = order;
        in.la_constant = la_constant(s.triplet.jump, grid.dim, order);
        in.tail_mass = tail_mass(s.triplet.jump, grid.dim, 1.0);
        in.tolerance = 0.05;
        report.append(holder_report(*ctx.value, in));
    } else if (name == "tightness") {
        require(ctx.measure && ctx.control, name, "a Fokker-Planck trajectory (mode mfg or fp)");
        report.append(tightness_report(*ctx.measure, *ctx.control, p.op, default_log_lyapunov(), 1e-9));
    } else if (name == "uniqueness" || name == "duality") {
        require(ctx.solution.has_value(), name, "an MFG solve (mode mfg)");
        require(!s.alternate_guess.empty(), name, "solver.alt_init");
        if (!ctx.second) {
            ctx.second = solve_mfg(p, constant_trajectory(make_measure(s.alternate_guess, grid), grid.steps), s.solver);
            log << "second run: " << ctx.second->iterations << " iterations, final residual "
                << ctx.second->residual_history.back() << (ctx.second->converged ? "" : " (not converged)") << '\n';
        }
        if (name == "uniqueness") {
            report.add(upper_check("uniqueness_converged", "", s.solver.tolerance, ctx.second->residual_history.back(),
                                   "second initialization converges"));
            report.add(upper_check("uniqueness_gap", "sup_t", 5.0 * s.solver.tolerance,
                                   d0_sup(ctx.solution->m.m, ctx.second->m.m),
                                   "independent initializations agree"));
        } else {
            const DualityReport d = duality_residual(p, *ctx.solution, *ctx.second);
            report.add(upper_check("duality_gap", "", grid.dt(), d.gap, "discrete duality identity"));
            report.add(upper_check("duality_terminal_sign", "T", 1e-12, d.terminal_pairing, "monotone terminal coupling"));
            report.add(upper_check("duality_running_sign", "sup_t", 1e-12, d.running_pairing, "monotone running coupling"));
            report.add(upper_check("duality_convexity", "", 1e-12, -d.convexity_gap, "convexity of the Hamiltonian"));
        }
    } else if (name == "fixed_point") {
        require(ctx.solution.has_value(), name, "an MFG solve (mode mfg)");
        report.add(upper_check("fixed_point", "sup_t", s.solver.tolerance, fixed_point_defect(p, *ctx.solution, s.solver),
                               "best response reproduces the solution"));
    } else if (name == "holmgren") {
        require(ctx.measure && ctx.control, name, "a Fokker-Planck trajectory (mode mfg or fp)");
        FpOptions refined = s.solver.fp;
        refined.min_substeps = 2 * std::max<std::size_t>(1, s.solver.fp.min_substeps);
        const MeasureTrajectory other = solve_fp(p.m0, *ctx.control, p.op, refined);
        const auto family = test_family(grid);
        const HolmgrenResult h = holmgren_residual(*ctx.measure, other, *ctx.control, p.op, family, grid.steps, s.solver.fp);
        for (std::size_t i = 0; i < family.size(); ++i)
            report.add(upper_check("holmgren", "phi" + std::to_string(i), grid.dt() * family[i].sup_norm(), h.residual[i],
                                   "dual test of two flows with the same initial measure"));
    } else if (name == "monotonicity") {
        const Coupling& c = p.running.is_zero() ? p.terminal : p.running;
        std::mt19937_64 rng(s.seed);
        double worst_sign = -std::numeric_limits<double>::infinity();
        double worst_identity = 0.0;
        for (int i = 0; i < 100; ++i) {
            const ProbabilityVector a = random_measure(grid, rng);
            const ProbabilityVector b = random_measure(grid, rng);
            const double pairing = monotonicity_pairing(c, a, b);
            worst_sign = std::max(worst_sign, pairing);
            worst_identity = std::max(worst_identity, std::abs(pairing + smoothed_l2_squared(c, a, b)));
        }
        report.add(upper_check("monotonicity_sign", "", 1e-12, worst_sign, "monotone coupling"));
        report.add(upper_check("monotonicity_identity", "", 1e-10, worst_identity, "pairing equals minus smoothed L2 norm"));
    } else if (name == "conjugate") {
        std::mt19937_64 rng(s.seed);
        std::uniform_real_distribution<double> dist(-5.0, 5.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double z = dist(rng);
            worst = std::max(worst, std::abs(conjugate_numeric(s.gain, z) - p.hamiltonian.value(z)));
        }
        report.add(upper_check("conjugate", "", 1e-6, worst, "numeric conjugate matches the closed form"));
    } else if (name == "max_principle") {
        require(!ctx.duals.empty(), name, "dual solves (mode dual)");
        for (std::size_t i = 0; i < ctx.duals.size(); ++i) {
            const auto& w = ctx.duals[i].w;
            const double lo = w.back().min(), hi = w.back().max();
            double excess = 0.0;
            for (const auto& slice : w) excess = std::max({excess, slice.max() - hi, lo - slice.min()});
            report.add(upper_check("max_principle", "phi" + std::to_string(i), 1e-12, excess,
                                   "dual solution stays within the range of its terminal value"));
        }
    } else {
        throw InvalidArgument("unknown check '" + name + "'");
    }
}

void write_file(const std::filesystem::path& path, const std::string& content, Report& report) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write '" + path.string() + "'");
    os << content;
    report.files.push_back(path.filename().string());
}

template <class T>
std::string binary_of(const T& value) {
    std::ostringstream os(std::ios::binary);
    write_binary(os, value);
    return os.str();
}

} // namespace

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{"mass",      "comparison", "holder",       "tightness",
                                                "uniqueness", "duality",    "fixed_point",  "holmgren",
                                                "monotonicity", "conjugate", "max_principle"};
    return names;
}

RunResult run_scenario(const Scenario& input, const RunOptions& options, std::ostream& log) {
    Scenario s = input;
    if (options.mode) s.mode = *options.mode;
    if (options.seed) s.seed = *options.seed;

    RunResult result;
    Report& report = result.report;
    report.metadata = {{"scenario", s.name}, {"mode", mode_name(s.mode)}, {"config_hash", config_hash(s)},
                       {"seed", std::to_string(s.seed)}};

    result.issues = validate(s);
    for (const auto& c : s.checks)
        if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
            result.issues.push_back({"checks", "unknown check '" + c + "'", true});
    bool fatal = false;
    for (const auto& issue : result.issues) {
        log << (issue.fatal ? "error" : "note") << " [" << issue.assumption << "]: " << issue.message << '\n';
        fatal = fatal || issue.fatal;
    }
    if (fatal && !options.force) {
        result.exit_code = exit_validation;
        return result;
    }

    std::vector<std::pair<std::string, double>> timings;
    auto timed = [&](const std::string& label, auto&& fn) {
        const auto start = Clock::now();
        fn();
        timings.emplace_back(label, std::chrono::duration<double>(Clock::now() - start).count());
    };

    const MfgProblem problem = build_problem(s);
    const GridSpec& grid = s.grid;
    Context ctx{s, problem, {}, {}, {}, {}, {}, {}, {}};
    bool diverged = false;
    std::ostringstream residuals;

    switch (s.mode) {
    case RunMode::mfg: {
        const ProbabilityVector init = s.initial_guess == "m0" ? problem.m0 : make_measure(s.initial_guess, grid);
        timed("solve_mfg", [&] { ctx.solution = solve_mfg(problem, constant_trajectory(init, grid.steps), s.solver); });
        const MfgSolution& sol = *ctx.solution;
        log << "mfg: " << sol.iterations << " iterations, final residual " << sol.residual_history.back()
            << (sol.converged ? "" : " (not converged)") << '\n';
        diverged = !sol.converged;
        residuals << "iteration,residual,damping\n";
        for (std::size_t i = 0; i < sol.residual_history.size(); ++i)
            residuals << i + 1 << ',' << format_double(sol.residual_history[i]) << ','
                      << (i < sol.damping_history.size() ? format_double(sol.damping_history[i]) : std::string("")) << '\n';
        ctx.value = sol.u;
        ctx.control = sol.b;
        ctx.measure = sol.m;
        HjbData data;
        if (!problem.running.is_zero())
            for (const auto& slice : sol.m.m) data.f.push_back(problem.running(slice));
        data.g = problem.terminal.is_zero() ? GridFunction(grid) : problem.terminal(sol.m.m.back());
        ctx.data = std::move(data);
        break;
    }
    case RunMode::hjb: {
        HjbData data;
        if (!problem.running.is_zero()) data.f.push_back(problem.running(problem.m0));
        data.g = terminal_extra(s);
        if (!problem.terminal.is_zero()) data.g += problem.terminal(problem.m0);
        timed("solve_hjb", [&] { ctx.value = solve_hjb(data.g, data.f, problem.hamiltonian, problem.op, s.solver.hjb); });
        ctx.control = control_field(*ctx.value, problem.hamiltonian);
        ctx.data = std::move(data);
        break;
    }
    case RunMode::fp:
        ctx.control = constant_control(grid, s.fp_control);
        timed("solve_fp", [&] { ctx.measure = solve_fp(problem.m0, *ctx.control, problem.op, s.solver.fp); });
        break;
    case RunMode::dual:
        ctx.control = constant_control(grid, s.fp_control);
        timed("solve_dual", [&] {
            for (const auto& phi : test_family(grid))
                ctx.duals.push_back(solve_dual(phi, *ctx.control, problem.op, grid.steps, s.solver.fp));
        });
        break;
    }

    if (!diverged) {
        for (const auto& c : s.checks) timed("check_" + c, [&] { run_check(c, ctx, report, log); });
    }

    if (!options.out_dir.empty()) {
        const std::filesystem::path dir(options.out_dir);
        std::filesystem::create_directories(dir);
        std::ostringstream csv;
        write_csv(csv, report.rows);
        write_file(dir / "report.csv", csv.str(), report);
        if (s.mode == RunMode::mfg) write_file(dir / "residuals.csv", residuals.str(), report);
        if (ctx.value) write_file(dir / "u.bin", binary_of(ctx.value->u), report);
        if (ctx.measure) write_file(dir / "m.bin", binary_of(ctx.measure->m), report);
        if (ctx.control && s.mode != RunMode::fp && s.mode != RunMode::dual)
            write_file(dir / "b.bin", binary_of(ctx.control->b), report);
        for (std::size_t i = 0; i < ctx.duals.size(); ++i)
            write_file(dir / ("w" + std::to_string(i) + ".bin"), binary_of(ctx.duals[i].w), report);
        std::ostringstream times;
        times << "stage,seconds\n";
        for (const auto& [label, secs] : timings) times << label << ',' << secs << '\n';
        write_file(dir / "timings.csv", times.str(), report);
        std::ostringstream manifest;
        for (const auto& [k, v] : report.metadata) manifest << k << " = " << v << '\n';
        manifest << "status = " << (diverged ? "diverged" : (report.all_pass() ? "pass" : "fail")) << '\n';
        for (const auto& f : report.files) manifest << "file = " << f << '\n';
        std::ofstream(dir / "manifest.txt") << manifest.str();
    }

    if (diverged) result.exit_code = exit_divergence;
    else result.exit_code = report.all_pass() ? exit_pass : exit_check_failure;
    return result;
}

} // namespace tcmfg
