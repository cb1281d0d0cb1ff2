#include "tcmfg/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tcmfg/error.hpp"

namespace tcmfg {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_number(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("expected a number in " + context + ", got '" + text + "'");
    }
}

// Parses name(a, b, ...) into the name and numeric arguments.
std::pair<std::string, std::vector<double>> call_syntax(const std::string& spec) {
    const auto open = spec.find('(');
    if (open == std::string::npos) return {trim(spec), {}};
    const auto close = spec.rfind(')');
    if (close == std::string::npos || close < open) throw InvalidArgument("unbalanced parentheses in '" + spec + "'");
    std::vector<double> args;
    for (const auto& a : split(spec.substr(open + 1, close - open - 1), ','))
        if (!a.empty()) args.push_back(to_number(a, spec));
    return {trim(spec.substr(0, open)), args};
}

Vec2 vec_from(const std::vector<double>& v, const std::string& key) {
    if (v.empty() || v.size() > 2) throw InvalidArgument("key '" + key + "' expects one or two numbers");
    return Vec2{v[0], v.size() > 1 ? v[1] : 0.0};
}

LevyMeasureSpec measure_from(const Config& c, int dim) {
    const std::string kind = c.get_string("levy.kind", "stable");
    LevyMeasureSpec nu;
    if (kind == "none") {
        nu = LevyMeasureSpec::none();
    } else if (kind == "stable") {
        nu = LevyMeasureSpec::stable(c.get_double("levy.sigma"), c.get_double("levy.intensity", 1.0));
    } else if (kind == "fractional_laplacian") {
        nu = LevyMeasureSpec::fractional_laplacian(dim, c.get_double("levy.sigma"), c.get_double("levy.scale", 1.0));
    } else if (kind == "cgmy") {
        nu = LevyMeasureSpec::cgmy(CgmyParams{c.get_double("levy.C"), c.get_double("levy.G"), c.get_double("levy.M"),
                                              c.get_double("levy.Y")});
    } else if (kind == "atoms") {
        std::vector<JumpAtom> atoms;
        const auto locations = c.get_doubles("levy.locations");
        const auto masses = c.get_doubles("levy.masses");
        if (locations.size() != masses.size() * static_cast<std::size_t>(dim))
            throw ParseError("levy.locations must hold dim numbers per entry of levy.masses", c.line("levy.locations"), 1);
        for (std::size_t i = 0; i < masses.size(); ++i) {
            Vec2 loc{locations[i * dim], dim == 2 ? locations[i * dim + 1] : 0.0};
            atoms.push_back({loc, masses[i]});
        }
        nu = LevyMeasureSpec::atoms(std::move(atoms));
    } else if (kind == "anisotropic") {
        const auto sigmas = c.get_doubles("levy.sigmas");
        const auto intensities = c.get_doubles("levy.intensities");
        if (sigmas.size() != intensities.size())
            throw ParseError("levy.sigmas and levy.intensities differ in length", c.line("levy.sigmas"), 1);
        std::vector<AxisStable> axes;
        for (std::size_t i = 0; i < sigmas.size(); ++i) axes.push_back({static_cast<int>(i), sigmas[i], intensities[i]});
        nu = LevyMeasureSpec::anisotropic(std::move(axes));
    } else {
        throw ParseError("unknown levy.kind '" + kind + "'", c.line("levy.kind"), 1);
    }
    if (c.has("levy.truncate")) nu = LevyMeasureSpec::truncated(nu, c.get_double("levy.truncate"));
    return nu;
}

GainFunction gain_from(const Config& c, const std::string& prefix) {
    const std::string key = prefix + ".variant";
    const std::string variant = c.get_string(key);
    // Parameters missing for the chosen variant are reported at the variant line.
    const auto param = [&](const std::string& name) {
        const std::string full = prefix + "." + name;
        if (!c.has(full))
            throw ParseError("variant '" + variant + "' requires key '" + full + "'", c.line(key), 1);
        return c.get_double(full);
    };
    if (variant == "indicator_point") return GainFunction::indicator_point(param("kappa"));
    if (variant == "indicator_interval") return GainFunction::indicator_interval(param("kappa"));
    if (variant == "regularized_interval")
        return GainFunction::regularized_interval(param("kappa"), param("eps"));
    if (variant == "power") return GainFunction::power(param("q"));
    if (variant == "entropy") return GainFunction::entropy();
    if (variant == "shifted") return GainFunction::shifted(gain_from(c, prefix + ".base"), param("kappa"));
    throw ParseError("unknown " + key + " '" + variant + "'", c.line(key), 1);
}

} // namespace

RunMode parse_mode(const std::string& text) {
    if (text == "mfg") return RunMode::mfg;
    if (text == "hjb") return RunMode::hjb;
    if (text == "fp") return RunMode::fp;
    if (text == "dual") return RunMode::dual;
    throw InvalidArgument("unknown mode '" + text + "' (expected mfg, hjb, fp or dual)");
}

std::string mode_name(RunMode mode) {
    switch (mode) {
    case RunMode::mfg: return "mfg";
    case RunMode::hjb: return "hjb";
    case RunMode::fp: return "fp";
    case RunMode::dual: return "dual";
    }
    return "mfg";
}

Scenario scenario_from_config(const Config& c) {
    Scenario s;
    s.name = c.get_string("name", "scenario");
    s.grid.dim = static_cast<int>(c.get_int("grid.dim", 1));
    s.grid.half_width = c.get_double("grid.half_width", 4.0);
    s.grid.points = static_cast<std::size_t>(c.get_int("grid.points", 256));
    s.grid.horizon = c.get_double("grid.horizon", 1.0);
    s.grid.steps = static_cast<std::size_t>(c.get_int("grid.steps", 100));

    s.triplet.dim = s.grid.dim;
    s.triplet.jump = measure_from(c, s.grid.dim);
    if (c.has("levy.drift")) s.triplet.drift = vec_from(c.get_doubles("levy.drift"), "levy.drift");
    if (c.has("levy.diffusion")) {
        const double a = c.get_double("levy.diffusion");
        s.triplet.diffusion = Mat2{Vec2{a, 0.0}, Vec2{0.0, s.grid.dim == 2 ? a : 0.0}};
    }
    s.epsilon = c.get_double("levy.epsilon");
    const std::string comp = c.get_string("levy.compensator", "moment_matched");
    if (comp == "moment_matched") s.approximation.compensator = Compensator::moment_matched;
    else if (comp == "reflected") s.approximation.compensator = Compensator::reflected;
    else throw ParseError("unknown levy.compensator '" + comp + "'", c.line("levy.compensator"), 1);
    s.approximation.far_periods = c.get_double("levy.far_periods", 0.0);

    s.gain = gain_from(c, "hamiltonian");
    s.claimed_lower_slope = c.get_double("hamiltonian.claim_lower_slope", 0.0);

    s.running = CouplingSpec{c.get_double("coupling.running_width", 0.5), c.get_double("coupling.running_strength", 0.0)};
    s.terminal = CouplingSpec{c.get_double("coupling.terminal_width", 0.5), c.get_double("coupling.terminal_strength", 0.0)};

    s.m0 = c.get_string("m0.spec", "uniform");
    s.initial_guess = c.get_string("solver.init", "m0");
    s.alternate_guess = c.get_string("solver.alt_init", "");
    s.solver.damping = c.get_double("solver.damping", 0.5);
    s.solver.damping_floor = c.get_double("solver.damping_floor", 1.0 / 16.0);
    s.solver.tolerance = c.get_double("solver.tolerance", 1e-5);
    s.solver.max_iterations = static_cast<std::size_t>(c.get_int("solver.max_iterations", 200));
    s.solver.hjb.min_substeps = static_cast<std::size_t>(c.get_int("solver.min_substeps", 1));
    s.solver.fp.min_substeps = s.solver.hjb.min_substeps;

    s.mode = parse_mode(c.get_string("run.mode", "mfg"));
    s.checks = c.get_list("run.checks");
    s.seed = static_cast<std::uint64_t>(c.get_int("run.seed", 1));
    s.terminal_function = c.get_string("terminal.function", "none");
    s.terminal_amplitude = c.get_double("terminal.amplitude", 0.0);
    s.fp_control = c.get_double("fp.control", 1.0);
    return s;
}

ProbabilityVector make_measure(const std::string& spec, const GridSpec& grid) {
    const std::string text = trim(spec);
    if (text.find(';') != std::string::npos || text.find('*') != std::string::npos) {
        std::vector<double> total(grid.size(), 0.0);
        double weight_sum = 0.0;
        for (const auto& part : split(text, ';')) {
            const auto star = part.find('*');
            const double w = star == std::string::npos ? 1.0 : to_number(trim(part.substr(0, star)), part);
            if (!(w >= 0.0)) throw InvalidArgument("mixture weights must be nonnegative");
            const ProbabilityVector piece = make_measure(star == std::string::npos ? part : part.substr(star + 1), grid);
            for (std::size_t k = 0; k < total.size(); ++k) total[k] += w * piece[k];
            weight_sum += w;
        }
        if (!(weight_sum > 0.0)) throw InvalidArgument("mixture weights sum to zero");
        for (double& v : total) v /= weight_sum;
        return ProbabilityVector(grid, std::move(total), 1e-10);
    }
    auto [name, args] = call_syntax(text);
    if (name == "uniform") return ProbabilityVector::uniform(grid);
    if (name == "gaussian") {
        if (grid.dim == 1 && args.size() == 2) return ProbabilityVector::gaussian(grid, {args[0], 0.0}, args[1]);
        if (grid.dim == 2 && args.size() == 3) return ProbabilityVector::gaussian(grid, {args[0], args[1]}, args[2]);
        throw InvalidArgument("gaussian expects (center, width) in 1D or (cx, cy, width) in 2D");
    }
    if (name == "dirac") {
        if (args.size() != 1 || args[0] < 0 || args[0] >= static_cast<double>(grid.size()))
            throw InvalidArgument("dirac expects a node index in [0, " + std::to_string(grid.size()) + ")");
        return ProbabilityVector::dirac(grid, static_cast<std::size_t>(args[0]));
    }
    throw InvalidArgument("unknown measure initializer '" + text + "'");
}

DiscreteLevyOp build_operator(const Scenario& s) {
    return build_epsilon_approx(s.triplet, s.epsilon, s.grid, s.approximation);
}

MfgProblem build_problem(const Scenario& s) {
    return MfgProblem{build_operator(s), closed_form(s.gain), Coupling(s.grid, s.running.width, s.running.strength),
                      Coupling(s.grid, s.terminal.width, s.terminal.strength), make_measure(s.m0, s.grid)};
}

GridFunction terminal_extra(const Scenario& s) {
    const double wave = 2.0 * std::numbers::pi / s.grid.period();
    const double a = s.terminal_amplitude;
    if (s.terminal_function == "none") return GridFunction(s.grid);
    if (s.terminal_function == "sin")
        return GridFunction::sample(s.grid, [&](double x, double) { return a * std::sin(wave * x); });
    if (s.terminal_function == "cos")
        return GridFunction::sample(s.grid, [&](double x, double) { return a * std::cos(wave * x); });
    throw InvalidArgument("unknown terminal.function '" + s.terminal_function + "'");
}

UniquenessArithmetic uniqueness_arithmetic(double two_sigma, double alpha, double gamma) {
    UniquenessArithmetic u;
    u.gamma = gamma;
    if (!(two_sigma < 1.0) || !(alpha > two_sigma)) {
        u.lhs = std::numeric_limits<double>::infinity();
        return u;
    }
    u.lhs = two_sigma / (alpha - two_sigma) * (1.0 + 1.0 / (1.0 - two_sigma));
    u.holds = u.lhs < gamma;
    return u;
}

double critical_power(double sigma) { return (1.0 + sigma) / (2.0 * sigma * (2.0 - sigma)); }

double jump_order(const LevyTriplet& t) {
    const LevyMeasureSpec* nu = &t.jump;
    while (nu->kind() == MeasureKind::truncated) nu = &nu->inner();
    switch (nu->kind()) {
    case MeasureKind::none:
    case MeasureKind::atoms: return 0.0;
    case MeasureKind::stable: return 2.0 * nu->sigma();
    case MeasureKind::cgmy: return nu->cgmy_params().Y;
    case MeasureKind::anisotropic: {
        double order = 0.0;
        for (const auto& a : nu->axis_list()) order = std::max(order, 2.0 * a.sigma);
        return order;
    }
    default: return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<ValidationIssue> validate(const Scenario& s) {
    std::vector<ValidationIssue> issues;
    auto guard = [&](const std::string& assumption, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            issues.push_back({assumption, e.what(), true});
        }
    };
    guard("grid", [&] { s.grid.validate(); });
    guard("Levy triplet", [&] { s.triplet.validate(); });
    if (s.triplet.dim != s.grid.dim) issues.push_back({"Levy triplet", "triplet and grid dimensions differ", true});
    guard("operator approximation", [&] { (void)build_operator(s); });
    guard("initial measure", [&] { (void)make_measure(s.m0, s.grid); });
    if (!s.alternate_guess.empty()) guard("initial measure", [&] { (void)make_measure(s.alternate_guess, s.grid); });
    if (s.initial_guess != "m0") guard("initial measure", [&] { (void)make_measure(s.initial_guess, s.grid); });
    if (s.running.strength < 0.0 || s.terminal.strength < 0.0)
        issues.push_back({"monotone coupling", "coupling strengths must be nonnegative", true});
    guard("couplings", [&] {
        (void)Coupling(s.grid, s.running.width, s.running.strength);
        (void)Coupling(s.grid, s.terminal.width, s.terminal.strength);
    });

    const Hamiltonian H = closed_form(s.gain);
    if (!H.differentiable())
        issues.push_back({"differentiable Hamiltonian",
                          H.name() + " has a kink at 0 (subdifferential [0, kappa]); the solvers need F' everywhere",
                          true});
    if (!H.globally_holder())
        issues.push_back({"Holder continuous F'", H.name() + " has F' only locally Holder continuous", false});
    if (s.claimed_lower_slope > 0.0 && H.lower_slope() < s.claimed_lower_slope)
        issues.push_back({"lower slope bound",
                          "F' >= " + std::to_string(s.claimed_lower_slope) + " is claimed but " + H.name() +
                              " only guarantees F' >= " + std::to_string(H.lower_slope()),
                          true});

    const double order = jump_order(s.triplet);
    if (std::isfinite(order) && order > 0.0) {
        const auto u = uniqueness_arithmetic(order, 1.0, H.gamma());
        std::ostringstream msg;
        msg << "2s/(alpha-2s)(1+1/(1-2s)) = " << u.lhs << " vs gamma = " << u.gamma << " at 2s = " << order
            << ", alpha = 1";
        if (s.gain.kind() == GainKind::power)
            msg << "; power exponent q = " << s.gain.exponent() << " vs critical q = " << critical_power(order / 2.0);
        issues.push_back({"uniqueness regime", msg.str() + (u.holds ? " (inside)" : " (outside: uniqueness not guaranteed)"),
                          false});
    }
    return issues;
}

} // namespace tcmfg
