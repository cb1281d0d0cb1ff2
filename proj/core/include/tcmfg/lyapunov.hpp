#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tcmfg/grid.hpp"
#include "tcmfg/levy.hpp"

namespace tcmfg {

using Profile = std::function<double(double)>;

/// V(x) = V0(sqrt(1 + |x|^2)) for a nondecreasing subadditive unbounded profile V0.
class LyapunovFn {
public:
    LyapunovFn(Profile value, Profile first, Profile second, double first_bound, double second_bound,
               std::vector<double> breakpoints = {});

    double profile(double t) const { return value_(t); }
    double profile_d1(double t) const { return first_(t); }
    double profile_d2(double t) const { return second_(t); }
    double first_derivative_bound() const { return first_bound_; }
    double second_derivative_bound() const { return second_bound_; }
    /// Points a_1 < a_2 < ... where the constructed profile changes slope (empty for closed forms).
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    double operator()(double x) const;
    double operator()(Vec2 x) const;
    /// First and second derivatives of the 1D field x -> V(x).
    double d1(double x) const;
    double d2(double x) const;

    GridFunction sample(const GridSpec& grid) const;

private:
    Profile value_;
    Profile first_;
    Profile second_;
    double first_bound_;
    double second_bound_;
    std::vector<double> breakpoints_;
};

struct LyapunovOptions {
    double horizon = 1e15;          // breakpoints beyond this are treated as infinite
    double tail_threshold = 1e-3;   // the tail must drop below this before the horizon
    std::size_t max_iterations = 1000000;
};

/// Builds V with m[V] <= 1 for every member of a family whose uniform tail is
/// tail(t) = sup_m m{|x| >= t}. Throws NoLyapunovError if the tail does not vanish.
LyapunovFn construct_lyapunov(const Profile& tail, const LyapunovOptions& options = {});

/// V(x) = log(sqrt(1 + |x|^2) + 1).
LyapunovFn default_log_lyapunov();

/// Upper bound on the sup norm of the fractional Laplacian of order sigma of the log Lyapunov function.
double log_lyapunov_bound(int dim, double sigma);

/// Largest value of V0(s + t) - V0(s) - V0(t) over random pairs in [0, scale]^2 (<= 0 when subadditive).
double subadditivity_defect(const LyapunovFn& v, std::size_t samples, double scale, std::uint64_t seed);

} // namespace tcmfg
