#pragma once

#include "tcmfg/grid.hpp"
#include "tcmfg/levy.hpp"

#include <functional>
#include <vector>

namespace tcmfg {

struct ReferenceOptions {
    /// Half-width of the Taylor-compensated square in cells: r_q = (taylor_cells + 1/2) h.
    int taylor_cells = 2;
    /// Jumps are integrated up to this many torus periods; the rest is spread uniformly. 0 selects the default.
    double far_periods = 0.0;
    int gauss_points = 16;
    /// Absolute error budget relative to max(1, ||phi||_inf).
    double tolerance = 1e-6;
};

struct ReferenceResult {
    GridFunction values;
    /// Estimated quadrature plus Taylor remainder error.
    double error_estimate = 0.0;
};

/// Compensated quadrature of L phi on the periodic grid (phi interpolated by 5-point Lagrange stencils).
/// Throws QuadratureError when the error estimate exceeds the tolerance.
GridFunction apply_levy(const LevyTriplet& triplet, const GridFunction& phi, const ReferenceOptions& options = {});
ReferenceResult apply_levy_estimate(const LevyTriplet& triplet, const GridFunction& phi, const ReferenceOptions& options = {});

using ScalarFn = std::function<double(double)>;

struct CallableOptions {
    /// Jumps below this radius use the second-order Taylor term.
    double taylor_radius = 1e-3;
    double tolerance = 1e-9;
    /// Points where phi varies fastest; jump integrals are split where x + z hits one.
    std::vector<double> features{0.0};
};

/// L phi(x) on the whole line (1D triplets only) for phi given with its first two derivatives.
double apply_levy(const LevyTriplet& triplet, const ScalarFn& phi, const ScalarFn& dphi, const ScalarFn& d2phi, double x,
                  const CallableOptions& options = {});

/// Central finite-difference weights on offsets -3..3 for derivative orders 1..4 (Fornberg).
const std::array<double, 7>& central_weights(int order);

/// Periodic finite-difference derivative d^order/dx_axis^order of a grid field.
GridFunction derivative(const GridFunction& phi, int axis, int order);

} // namespace tcmfg
