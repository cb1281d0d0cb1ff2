#pragma once

#include <memory>
#include <string>
#include <utility>

namespace tcmfg {

enum class GainKind {
    indicator_point,      // L = indicator of {kappa}
    indicator_interval,   // L = indicator of [0, kappa]
    regularized_interval, // L = indicator of [0, kappa] plus width * (zeta^2 / kappa - zeta)
    power,                // L = zeta^q / q
    entropy,              // L = zeta log zeta - zeta
    shifted,              // L = base(zeta - kappa) on [kappa, inf)
};

/// Convex lower-semicontinuous gain on [0, inf), +inf outside its effective domain.
class GainFunction {
public:
    static GainFunction indicator_point(double kappa);
    static GainFunction indicator_interval(double kappa);
    static GainFunction regularized_interval(double kappa, double width);
    static GainFunction power(double q);
    static GainFunction entropy();
    static GainFunction shifted(const GainFunction& base, double kappa);

    GainKind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double width() const { return width_; }
    double exponent() const { return exponent_; }
    const GainFunction& base() const { return *base_; }

    double operator()(double zeta) const;
    /// Effective domain [lower, upper]; upper may be +inf.
    double domain_lower() const;
    double domain_upper() const;

    std::string name() const;

private:
    GainFunction(GainKind kind, double kappa, double width, double exponent,
                 std::shared_ptr<const GainFunction> base);

    GainKind kind_;
    double kappa_ = 0.0;
    double width_ = 0.0;
    double exponent_ = 2.0;
    std::shared_ptr<const GainFunction> base_;
};

/// Conjugate F(z) = sup_{zeta >= 0} (z zeta - L(zeta)) in closed form, with its metadata.
class Hamiltonian {
public:
    explicit Hamiltonian(GainFunction gain);

    const GainFunction& gain() const { return gain_; }
    double operator()(double z) const { return value(z); }
    double value(double z) const;
    /// F'(z); throws NotDifferentiableError at kinks.
    double derivative(double z) const;
    /// Subdifferential [lower, upper] of F at z.
    std::pair<double, double> subdifferential(double z) const;

    bool differentiable() const;
    bool convex() const { return true; }
    /// Holder exponent of F' (local when not globally_holder()).
    double gamma() const;
    bool globally_holder() const;
    /// Holder constant of F' over |z1 - z2| <= 1 (inf when unbounded).
    double holder_constant() const;
    /// Lower bound kappa with F' >= kappa everywhere (0 when no such bound is claimed).
    double lower_slope() const;
    /// sup of F' over (-inf, z]; F' is nondecreasing for every supported gain.
    double derivative_bound(double z) const;

    std::string name() const { return gain_.name(); }

private:
    GainFunction gain_;
};

struct ConjugateOptions {
    std::size_t points = 65;
    std::size_t refinements = 80;
    double initial_extent = 4.0;
    double max_extent = 1e12;
};

/// Brute-force sup over a zeta grid, extended geometrically until the argmax is interior.
/// Returns +inf when the supremum is unbounded within max_extent.
double conjugate_numeric(const GainFunction& gain, double z, const ConjugateOptions& options = {});

/// Closed-form Hamiltonian for a gain.
Hamiltonian closed_form(const GainFunction& gain);

/// Optimal control F'(z); throws NotDifferentiableError (with the subdifferential) at kinks.
double optimal_control(const Hamiltonian& hamiltonian, double z);

} // namespace tcmfg
