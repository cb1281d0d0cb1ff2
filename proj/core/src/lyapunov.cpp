#include "tcmfg/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include "tcmfg/error.hpp"

namespace tcmfg {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Transition polynomial on [-1, 1) and its antiderivative from -1.
double transition(double s) { return 0.25 * (s * s * s - 3.0 * s + 6.0); }
double transition_slope(double s) { return 0.25 * (3.0 * s * s - 3.0); }
double transition_integral(double s) {
    return 0.25 * (s * s * s * s / 4.0 - 1.5 * s * s + 6.0 * s) + 1.8125;
}

// One piece of the smoothed concave profile v2.
struct Segment {
    double start = 0.0;
    double end = kInfinity;
    double value = 0.0;  // v2(start)
    double scale = 1.0;  // 2^{-n}
    double center = 0.0; // a_n for transition windows
    bool window = false;

    double offset(double t) const {
        if (!window) return scale * (t - start);
        return scale * 0.125 * transition_integral(8.0 * (t - center));
    }
    double slope(double t) const { return window ? scale * transition(8.0 * (t - center)) : scale; }
    double curvature(double t) const { return window ? scale * 8.0 * transition_slope(8.0 * (t - center)) : 0.0; }
};

struct SmoothedProfile {
    std::vector<Segment> segments;

    const Segment& locate(double t) const {
        auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                   [](double x, const Segment& s) { return x < s.start; });
        return it == segments.begin() ? segments.front() : *std::prev(it);
    }
    double v2(double t) const {
        const Segment& s = locate(t);
        return s.value + s.offset(t);
    }
};

double neg_log(double v) { return v <= 0.0 ? kInfinity : -std::log(v); }

// Breakpoints a_1, a_2, ... of the piecewise affine minorant of -log(tail).
std::vector<double> affine_breakpoints(const Profile& tail, const LyapunovOptions& options) {
    std::vector<double> a{0.0};
    for (int n = 0;; ++n) {
        const double slope = std::ldexp(1.0, -n);
        const double threshold = 0.5 * slope;
        const double start = a.back();
        const double level = neg_log(tail(start));
        // Once the threshold is at round-off of -log(tail) the search is treated like the horizon.
        if (threshold <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(level))) break;
        const double intercept = level - slope;
        double t = start;
        double next = kInfinity;
        for (std::size_t it = 0;; ++it) {
            if (it >= options.max_iterations)
                throw NoLyapunovError("breakpoint search did not converge after " + std::to_string(it) +
                                      " iterations near t = " + std::to_string(t));
            const double gap = neg_log(tail(t)) - (slope * (t - start) + intercept);
            if (!std::isfinite(gap)) break;
            const double step = (gap - threshold) / slope;
            // Stopping short of the crossing is safe: the gap there still exceeds the threshold.
            if (gap - threshold <= 1e-9 * threshold || t + step == t) {
                next = t;
                break;
            }
            t += step;
            if (t > options.horizon) break;
        }
        if (!std::isfinite(next)) break;
        a.push_back(next);
    }
    return a;
}

} // namespace

LyapunovFn::LyapunovFn(Profile value, Profile first, Profile second, double first_bound, double second_bound,
                       std::vector<double> breakpoints)
    : value_(std::move(value)),
      first_(std::move(first)),
      second_(std::move(second)),
      first_bound_(first_bound),
      second_bound_(second_bound),
      breakpoints_(std::move(breakpoints)) {}

double LyapunovFn::operator()(double x) const { return value_(std::hypot(1.0, x)); }

double LyapunovFn::operator()(Vec2 x) const { return value_(std::hypot(1.0, std::hypot(x[0], x[1]))); }

double LyapunovFn::d1(double x) const {
    const double s = std::hypot(1.0, x);
    return first_(s) * x / s;
}

double LyapunovFn::d2(double x) const {
    const double s = std::hypot(1.0, x);
    const double ratio = x / s;
    return second_(s) * ratio * ratio + first_(s) / s / s / s;
}

GridFunction LyapunovFn::sample(const GridSpec& grid) const {
    return GridFunction::sample(grid, [this](double x, double y) { return (*this)(Vec2{x, y}); });
}

LyapunovFn construct_lyapunov(const Profile& tail, const LyapunovOptions& options) {
    const double at_zero = tail(0.0);
    if (std::abs(at_zero - 1.0) > 1e-12)
        throw InvalidArgument("tail function must equal 1 at 0, got " + std::to_string(at_zero));
    const double far = tail(options.horizon);
    if (!(far < options.tail_threshold))
        throw NoLyapunovError("family is not tight: tail(" + std::to_string(options.horizon) +
                              ") = " + std::to_string(far));

    const std::vector<double> a = affine_breakpoints(tail, options);
    auto profile = std::make_shared<SmoothedProfile>();
    auto& segs = profile->segments;
    const std::size_t last = a.size() - 1; // index N of the final breakpoint
    double value = -1.0;
    auto push = [&](Segment s) {
        s.value = value;
        if (std::isfinite(s.end)) value += s.offset(s.end);
        segs.push_back(s);
    };
    push(Segment{0.0, last >= 1 ? a[1] - 0.125 : kInfinity, 0.0, 1.0, 0.0, false});
    for (std::size_t n = 1; n <= last; ++n) {
        const double scale = std::ldexp(1.0, -static_cast<int>(n));
        push(Segment{a[n] - 0.125, a[n] + 0.125, 0.0, scale, a[n], true});
        push(Segment{a[n] + 0.125, n < last ? a[n + 1] - 0.125 : kInfinity, 0.0, scale, 0.0, false});
    }

    std::vector<double> breaks(a.begin() + 1, a.end());
    return LyapunovFn(
        [profile](double t) { return (profile->v2(t) + 1.0) / 3.0; },
        [profile](double t) { return profile->locate(t).slope(t) / 3.0; },
        [profile](double t) { return profile->locate(t).curvature(t) / 3.0; },
        1.0 / 3.0, 1.0, std::move(breaks));
}

LyapunovFn default_log_lyapunov() {
    return LyapunovFn([](double t) { return std::log(t + 1.0); },
                      [](double t) { return 1.0 / (t + 1.0); },
                      [](double t) { return -1.0 / ((t + 1.0) * (t + 1.0)); }, 1.0, 1.0);
}

double log_lyapunov_bound(int dim, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in (0, 1)");
    const double pi = std::numbers::pi;
    return fractional_constant(dim, sigma) * sphere_measure(dim) / (2.0 * sigma) *
           (std::log(4.0) + pi / std::sin(pi * sigma));
}

double subadditivity_defect(const LyapunovFn& v, std::size_t samples, double scale, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, scale);
    double worst = -kInfinity;
    for (std::size_t i = 0; i < samples; ++i) {
        const double s = dist(rng);
        const double t = dist(rng);
        worst = std::max(worst, v.profile(s + t) - v.profile(s) - v.profile(t));
    }
    return worst;
}

} // namespace tcmfg
