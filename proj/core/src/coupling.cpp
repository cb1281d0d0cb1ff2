#include "tcmfg/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tcmfg/error.hpp"
#include "tcmfg/spectral.hpp"

namespace tcmfg {

namespace {

// Flat index of the displacement (node k minus the origin node) modulo N.
std::size_t displacement_index(const GridSpec& grid, std::size_t node) {
    const std::size_t n = grid.points;
    const std::size_t half = n / 2;
    if (grid.dim == 1) return (node + n - half) % n;
    const std::size_t i = node / n;
    const std::size_t j = node % n;
    return ((i + n - half) % n) * n + (j + n - half) % n;
}

std::vector<double> by_displacement(const GridFunction& centered) {
    std::vector<double> out(centered.size());
    for (std::size_t k = 0; k < centered.size(); ++k) out[displacement_index(centered.grid(), k)] = centered[k];
    return out;
}

GridFunction by_node(const GridSpec& grid, const std::vector<double>& displaced) {
    GridFunction out(grid);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = displaced[displacement_index(grid, k)];
    return out;
}

double periodized_gaussian(double x, double period, double width) {
    double s = 0.0;
    for (int image = -3; image <= 3; ++image) {
        const double y = x + image * period;
        s += std::exp(-0.5 * y * y / (width * width));
    }
    return s;
}

} // namespace

Coupling::Coupling(const GridSpec& grid, double width, double strength)
    : grid_(grid), width_(width), strength_(strength) {
    grid.validate();
    if (!(strength >= 0.0)) throw InvalidArgument("coupling strength must be nonnegative");
    if (strength == 0.0) {
        kernel_ = GridFunction(grid);
        autocorrelation_ = GridFunction(grid);
        return;
    }
    if (!(width > 0.0)) throw InvalidArgument("coupling kernel width must be positive");
    const double period = grid.period();
    kernel_ = GridFunction::sample(grid, [&](double x, double y) {
        double v = periodized_gaussian(x, period, width);
        if (grid.dim == 2) v *= periodized_gaussian(y, period, width);
        return v;
    });
    double total = 0.0;
    for (std::size_t k = 0; k < kernel_.size(); ++k) total += kernel_[k];
    kernel_ *= 1.0 / (total * grid.cell_volume());

    kernel_origin_ = by_displacement(kernel_);
    reflected_origin_.assign(kernel_origin_.size(), 0.0);
    for (std::size_t k = 0; k < kernel_.size(); ++k) {
        // rho~ at displacement o is rho at -o: reflect the node index through the origin node.
        const std::size_t n = grid.points;
        std::size_t mirrored;
        if (grid.dim == 1) {
            mirrored = (n - k) % n;
        } else {
            const std::size_t i = k / n, j = k % n;
            mirrored = ((n - i) % n) * n + (n - j) % n;
        }
        reflected_origin_[k] = kernel_origin_[mirrored];
    }
    auto_origin_ = circular_convolution(grid, reflected_origin_, kernel_origin_);
    for (double& v : auto_origin_) v *= grid.cell_volume();
    autocorrelation_ = by_node(grid, auto_origin_);
}

GridFunction Coupling::operator()(const ProbabilityVector& m) const {
    if (!(m.grid() == grid_)) throw InvalidArgument("measure and coupling live on different grids");
    if (is_zero()) return GridFunction(grid_);
    std::vector<double> out = circular_convolution(grid_, auto_origin_, m.masses());
    GridFunction f(grid_, std::move(out));
    f *= -strength_;
    return f;
}

GridFunction Coupling::smoothed(const ProbabilityVector& m) const {
    if (!(m.grid() == grid_)) throw InvalidArgument("measure and coupling live on different grids");
    if (is_zero()) return GridFunction(grid_);
    return GridFunction(grid_, circular_convolution(grid_, kernel_origin_, m.masses()));
}

double Coupling::sup_bound() const { return strength_ * autocorrelation_.sup_norm(); }

double Coupling::lipschitz_bound() const {
    if (is_zero()) return 0.0;
    double worst = 0.0;
    const Offset steps[2] = {Offset{1, 0}, Offset{0, 1}};
    for (std::size_t k = 0; k < autocorrelation_.size(); ++k) {
        for (int a = 0; a < grid_.dim; ++a)
            worst = std::max(worst, std::abs(autocorrelation_[shift_index(k, steps[a], grid_)] - autocorrelation_[k]));
    }
    return strength_ * worst / grid_.spacing();
}

double monotonicity_pairing(const Coupling& c, const ProbabilityVector& m1, const ProbabilityVector& m2) {
    const GridFunction f1 = c(m1);
    const GridFunction f2 = c(m2);
    double s = 0.0;
    for (std::size_t k = 0; k < f1.size(); ++k) s += (f1[k] - f2[k]) * (m1[k] - m2[k]);
    return s;
}

double smoothed_l2_squared(const Coupling& c, const ProbabilityVector& m1, const ProbabilityVector& m2) {
    const GridFunction s1 = c.smoothed(m1);
    const GridFunction s2 = c.smoothed(m2);
    double s = 0.0;
    for (std::size_t k = 0; k < s1.size(); ++k) s += (s1[k] - s2[k]) * (s1[k] - s2[k]);
    return c.strength() * s * c.grid().cell_volume();
}

} // namespace tcmfg
