#include "tcmfg/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "tcmfg/error.hpp"

namespace tcmfg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

GainFunction::GainFunction(GainKind kind, double kappa, double width, double exponent,
                           std::shared_ptr<const GainFunction> base)
    : kind_(kind), kappa_(kappa), width_(width), exponent_(exponent), base_(std::move(base)) {}

GainFunction GainFunction::indicator_point(double kappa) {
    if (!(kappa >= 0.0)) throw InvalidArgument("indicator_point requires kappa >= 0");
    return GainFunction(GainKind::indicator_point, kappa, 0.0, 0.0, nullptr);
}

GainFunction GainFunction::indicator_interval(double kappa) {
    if (!(kappa >= 0.0)) throw InvalidArgument("indicator_interval requires kappa >= 0");
    return GainFunction(GainKind::indicator_interval, kappa, 0.0, 0.0, nullptr);
}

GainFunction GainFunction::regularized_interval(double kappa, double width) {
    if (!(kappa > 0.0)) throw InvalidArgument("regularized_interval requires kappa > 0");
    if (!(width > 0.0)) throw InvalidArgument("regularized_interval requires eps > 0");
    return GainFunction(GainKind::regularized_interval, kappa, width, 0.0, nullptr);
}

GainFunction GainFunction::power(double q) {
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("power gain requires q > 1");
    return GainFunction(GainKind::power, 0.0, 0.0, q, nullptr);
}

GainFunction GainFunction::entropy() { return GainFunction(GainKind::entropy, 0.0, 0.0, 0.0, nullptr); }

GainFunction GainFunction::shifted(const GainFunction& base, double kappa) {
    if (!(kappa >= 0.0)) throw InvalidArgument("shifted gain requires kappa >= 0");
    return GainFunction(GainKind::shifted, kappa, 0.0, 0.0, std::make_shared<const GainFunction>(base));
}

double GainFunction::operator()(double zeta) const {
    if (zeta < domain_lower() || zeta > domain_upper() || std::isnan(zeta)) return kInf;
    switch (kind_) {
    case GainKind::indicator_point:
    case GainKind::indicator_interval: return 0.0;
    case GainKind::regularized_interval: return width_ * (zeta * zeta / kappa_ - zeta);
    case GainKind::power: return std::pow(zeta, exponent_) / exponent_;
    case GainKind::entropy: return zeta == 0.0 ? 0.0 : zeta * std::log(zeta) - zeta;
    case GainKind::shifted: return (*base_)(zeta - kappa_);
    }
    return kInf;
}

double GainFunction::domain_lower() const {
    switch (kind_) {
    case GainKind::indicator_point: return kappa_;
    case GainKind::shifted: return kappa_ + base_->domain_lower();
    default: return 0.0;
    }
}

double GainFunction::domain_upper() const {
    switch (kind_) {
    case GainKind::indicator_point:
    case GainKind::indicator_interval:
    case GainKind::regularized_interval: return kappa_;
    case GainKind::shifted: return kappa_ + base_->domain_upper();
    default: return kInf;
    }
}

std::string GainFunction::name() const {
    switch (kind_) {
    case GainKind::indicator_point: return "indicator_point(kappa=" + number(kappa_) + ")";
    case GainKind::indicator_interval: return "indicator_interval(kappa=" + number(kappa_) + ")";
    case GainKind::regularized_interval:
        return "regularized_interval(kappa=" + number(kappa_) + ", eps=" + number(width_) + ")";
    case GainKind::power: return "power(q=" + number(exponent_) + ")";
    case GainKind::entropy: return "entropy";
    case GainKind::shifted: return "shifted(" + base_->name() + ", kappa=" + number(kappa_) + ")";
    }
    return "unknown";
}

Hamiltonian::Hamiltonian(GainFunction gain) : gain_(std::move(gain)) {}

double Hamiltonian::value(double z) const {
    const double k = gain_.kappa();
    switch (gain_.kind()) {
    case GainKind::indicator_point: return k * z;
    case GainKind::indicator_interval: return k * std::max(z, 0.0);
    case GainKind::regularized_interval: {
        const double e = gain_.width();
        if (z < -e) return 0.0;
        if (z < e) return k * (z + e) * (z + e) / (4.0 * e);
        return k * z;
    }
    case GainKind::power: {
        if (z <= 0.0) return 0.0;
        const double q = gain_.exponent();
        return (q - 1.0) / q * std::exp(q / (q - 1.0) * std::log(z));
    }
    case GainKind::entropy: return std::exp(z);
    case GainKind::shifted: return Hamiltonian(gain_.base()).value(z) + k * z;
    }
    return kInf;
}

std::pair<double, double> Hamiltonian::subdifferential(double z) const {
    const double k = gain_.kappa();
    switch (gain_.kind()) {
    case GainKind::indicator_point: return {k, k};
    case GainKind::indicator_interval:
        if (z < 0.0) return {0.0, 0.0};
        if (z > 0.0) return {k, k};
        return {0.0, k};
    case GainKind::regularized_interval: {
        const double e = gain_.width();
        const double s = z < -e ? 0.0 : (z < e ? k * (z + e) / (2.0 * e) : k);
        return {s, s};
    }
    case GainKind::power: {
        const double s = z <= 0.0 ? 0.0 : std::exp(std::log(z) / (gain_.exponent() - 1.0));
        return {s, s};
    }
    case GainKind::entropy: return {std::exp(z), std::exp(z)};
    case GainKind::shifted: {
        auto [lo, hi] = Hamiltonian(gain_.base()).subdifferential(z);
        return {lo + k, hi + k};
    }
    }
    return {0.0, kInf};
}

double Hamiltonian::derivative(double z) const {
    auto [lo, hi] = subdifferential(z);
    if (lo != hi)
        throw NotDifferentiableError(name() + " is not differentiable at z = " + number(z) +
                                     "; subdifferential is [" + number(lo) + ", " + number(hi) + "]");
    return lo;
}

bool Hamiltonian::differentiable() const {
    switch (gain_.kind()) {
    case GainKind::indicator_interval: return gain_.kappa() == 0.0;
    case GainKind::shifted: return Hamiltonian(gain_.base()).differentiable();
    default: return true;
    }
}

double Hamiltonian::gamma() const {
    switch (gain_.kind()) {
    case GainKind::power: return std::min(1.0, 1.0 / (gain_.exponent() - 1.0));
    case GainKind::shifted: return Hamiltonian(gain_.base()).gamma();
    default: return 1.0;
    }
}

bool Hamiltonian::globally_holder() const {
    switch (gain_.kind()) {
    case GainKind::indicator_interval: return differentiable();
    case GainKind::power: return gain_.exponent() >= 2.0;
    case GainKind::entropy: return false;
    case GainKind::shifted: return Hamiltonian(gain_.base()).globally_holder();
    default: return true;
    }
}

double Hamiltonian::holder_constant() const {
    switch (gain_.kind()) {
    case GainKind::indicator_point: return 0.0;
    case GainKind::indicator_interval: return differentiable() ? 0.0 : kInf;
    case GainKind::regularized_interval: return gain_.kappa() / (2.0 * gain_.width());
    case GainKind::power: return gain_.exponent() >= 2.0 ? 1.0 : kInf;
    case GainKind::entropy: return kInf;
    case GainKind::shifted: return Hamiltonian(gain_.base()).holder_constant();
    }
    return kInf;
}

double Hamiltonian::lower_slope() const {
    switch (gain_.kind()) {
    case GainKind::indicator_point: return gain_.kappa();
    case GainKind::shifted: return Hamiltonian(gain_.base()).lower_slope() + gain_.kappa();
    default: return 0.0;
    }
}

double Hamiltonian::derivative_bound(double z) const { return subdifferential(z).second; }

double conjugate_numeric(const GainFunction& gain, double z, const ConjugateOptions& options) {
    if (options.points < 3) throw InvalidArgument("conjugate_numeric needs at least 3 grid points");
    const double lower = gain.domain_lower();
    const double upper = gain.domain_upper();
    auto objective = [&](double zeta) { return z * zeta - gain(zeta); };
    if (lower == upper) return objective(lower);

    const std::size_t n = options.points;
    double best = -kInf;
    // Scans [a, b] and returns the index of the discrete argmax.
    auto scan = [&](double a, double b, std::vector<double>& nodes) {
        nodes.resize(n);
        std::size_t arg = 0;
        double local = -kInf;
        for (std::size_t i = 0; i < n; ++i) {
            nodes[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
            const double v = objective(nodes[i]);
            if (v > local) {
                local = v;
                arg = i;
            }
        }
        best = std::max(best, local);
        return arg;
    };

    std::vector<double> nodes;
    double right = std::isfinite(upper) ? upper : lower + options.initial_extent;
    std::size_t arg = scan(lower, right, nodes);
    while (!std::isfinite(upper) && arg + 1 == n) {
        right = lower + 2.0 * (right - lower);
        if (right - lower > options.max_extent) return kInf;
        arg = scan(lower, right, nodes);
    }
    for (std::size_t r = 0; r < options.refinements; ++r) {
        const double a = nodes[arg == 0 ? 0 : arg - 1];
        const double b = nodes[arg + 1 == n ? n - 1 : arg + 1];
        if (b - a <= 1e-15 * (1.0 + std::abs(b))) break;
        arg = scan(a, b, nodes);
    }
    return best;
}

Hamiltonian closed_form(const GainFunction& gain) { return Hamiltonian(gain); }

double optimal_control(const Hamiltonian& hamiltonian, double z) { return hamiltonian.derivative(z); }

} // namespace tcmfg
