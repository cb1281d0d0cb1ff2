#pragma once

#include "tcmfg/grid.hpp"

namespace tcmfg {

/// Monotone smoothing coupling m -> -strength * (rho~ * rho * m) with a periodized Gaussian
/// probability kernel rho and rho~(x) = rho(-x).
class Coupling {
public:
    Coupling() = default;
    /// width is the Gaussian standard deviation; strength >= 0 (0 gives the zero coupling).
    Coupling(const GridSpec& grid, double width, double strength);
    static Coupling zero(const GridSpec& grid) { return Coupling(grid, 0.0, 0.0); }

    const GridSpec& grid() const { return grid_; }
    double width() const { return width_; }
    double strength() const { return strength_; }
    bool is_zero() const { return strength_ == 0.0; }

    /// Kernel density at node offsets from the origin (node index k holds rho(x_k + R)).
    const GridFunction& kernel() const { return kernel_; }
    /// Kernel rho~ * rho sampled the same way.
    const GridFunction& autocorrelation() const { return autocorrelation_; }

    GridFunction operator()(const ProbabilityVector& m) const;
    /// Density rho * m at the nodes.
    GridFunction smoothed(const ProbabilityVector& m) const;

    /// strength * ||rho~ * rho||_inf, an upper bound for the sup norm of every output.
    double sup_bound() const;
    /// strength * Lipschitz constant of rho~ * rho over grid neighbours, bounding the output's.
    double lipschitz_bound() const;

private:
    GridSpec grid_{};
    double width_ = 0.0;
    double strength_ = 0.0;
    GridFunction kernel_;
    GridFunction autocorrelation_;
    std::vector<double> kernel_origin_;    // rho indexed by displacement (flat index of offset mod N)
    std::vector<double> reflected_origin_; // rho~ indexed the same way
    std::vector<double> auto_origin_;      // rho~ * rho indexed the same way
};

/// Pairing sum_x (f(m1) - f(m2))(x) (m1 - m2)(x); <= 0 for monotone couplings.
double monotonicity_pairing(const Coupling& c, const ProbabilityVector& m1, const ProbabilityVector& m2);

/// strength * ||rho * (m1 - m2)||^2 in L2 with cell volume h^d.
double smoothed_l2_squared(const Coupling& c, const ProbabilityVector& m1, const ProbabilityVector& m2);

} // namespace tcmfg
