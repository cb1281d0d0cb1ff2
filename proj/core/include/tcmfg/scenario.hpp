#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tcmfg/config.hpp"
#include "tcmfg/grid.hpp"
#include "tcmfg/hamiltonian.hpp"
#include "tcmfg/levy.hpp"
#include "tcmfg/mfg.hpp"
#include "tcmfg/stencil.hpp"

namespace tcmfg {

enum class RunMode { mfg, hjb, fp, dual };

RunMode parse_mode(const std::string& text);
std::string mode_name(RunMode mode);

struct CouplingSpec {
    double width = 0.5;
    double strength = 0.0;
};

/// Everything needed to build and run one problem.
struct Scenario {
    std::string name = "scenario";
    GridSpec grid{};
    LevyTriplet triplet{};
    double epsilon = 0.1;
    EpsilonOptions approximation{};
    GainFunction gain = GainFunction::power(2.0);
    double claimed_lower_slope = 0.0; // F' >= this is asserted by the scenario
    CouplingSpec running{};
    CouplingSpec terminal{};
    std::string m0 = "uniform";
    std::string initial_guess = "m0";     // solver starting trajectory
    std::string alternate_guess = "";     // second start for the uniqueness check
    MfgOptions solver{};
    RunMode mode = RunMode::mfg;
    std::vector<std::string> checks;
    std::uint64_t seed = 1;
    std::string terminal_function = "none"; // extra terminal cost: none, sin, cos
    double terminal_amplitude = 0.0;
    double fp_control = 1.0;                // constant control for fp and dual modes
};

/// Reads a scenario; throws ParseError on missing or malformed keys.
Scenario scenario_from_config(const Config& config);

/// Builds an initializer: uniform, gaussian(c, w), gaussian(cx, cy, w), dirac(i), or
/// mixture entries joined by ';' with weights given as `w*spec`.
ProbabilityVector make_measure(const std::string& spec, const GridSpec& grid);

DiscreteLevyOp build_operator(const Scenario& s);
MfgProblem build_problem(const Scenario& s);
/// Extra terminal cost added in hjb mode.
GridFunction terminal_extra(const Scenario& s);

struct ValidationIssue {
    std::string assumption;
    std::string message;
    bool fatal = true;
};

/// Uniqueness arithmetic: 2 sigma / (alpha - 2 sigma) (1 + 1 / (1 - 2 sigma)) < gamma.
struct UniquenessArithmetic {
    double lhs = 0.0;
    double gamma = 0.0;
    bool holds = false;
};
UniquenessArithmetic uniqueness_arithmetic(double two_sigma, double alpha, double gamma);

/// Largest power exponent q for which the power Hamiltonian stays in the uniqueness regime at order sigma.
double critical_power(double sigma);

/// Order 2 sigma of the jump part for the families where it is defined (stable, fractional Laplacian,
/// anisotropic, truncated of those, CGMY uses Y); NaN otherwise.
double jump_order(const LevyTriplet& t);

std::vector<ValidationIssue> validate(const Scenario& s);

} // namespace tcmfg
