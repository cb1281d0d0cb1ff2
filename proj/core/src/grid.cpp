#include "tcmfg/grid.hpp"

#include "tcmfg/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tcmfg {

double GridSpec::cell_volume() const { return dim == 1 ? spacing() : spacing() * spacing(); }

std::size_t GridSpec::size() const { return dim == 1 ? points : points * points; }

std::array<double, 2> GridSpec::position(std::size_t flat) const {
    if (dim == 1) return {coordinate(flat), 0.0};
    return {coordinate(flat / points), coordinate(flat % points)};
}

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) throw InvalidArgument("grid dimension must be 1 or 2");
    if (points < 2 || (points & (points - 1)) != 0)
        throw InvalidArgument("grid points per axis must be a power of two >= 2, got " + std::to_string(points));
    if (!(half_width > 0.0)) throw InvalidArgument("grid half-width must be positive");
    if (!(spacing() < 1.0))
        throw InvalidArgument("grid spacing must be < 1 (got " + std::to_string(spacing()) + ")");
    if (!(horizon > 0.0)) throw InvalidArgument("time horizon must be positive");
    if (steps == 0) throw InvalidArgument("time steps must be positive");
}

Offset wrap(Offset o, const GridSpec& grid) {
    const int n = static_cast<int>(grid.points);
    auto w = [n](int v) {
        int r = ((v % n) + n) % n;
        return r >= n / 2 ? r - n : r;
    };
    return {w(o.dx), grid.dim == 1 ? 0 : w(o.dy)};
}

std::size_t shift_index(std::size_t flat, Offset o, const GridSpec& grid) {
    const long n = static_cast<long>(grid.points);
    auto mod = [n](long v) { return static_cast<std::size_t>(((v % n) + n) % n); };
    if (grid.dim == 1) return mod(static_cast<long>(flat) + o.dx);
    long i = static_cast<long>(flat / grid.points);
    long j = static_cast<long>(flat % grid.points);
    return mod(i + o.dx) * grid.points + mod(j + o.dy);
}

GridFunction::GridFunction(const GridSpec& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

GridFunction::GridFunction(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw InvalidArgument("grid function size does not match grid");
}

double GridFunction::sup_norm() const {
    double s = 0.0;
    for (double v : values_) s = std::max(s, std::abs(v));
    return s;
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool GridFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}
GridFunction& GridFunction::operator-=(const GridFunction& o) {
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}
GridFunction& GridFunction::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}
GridFunction& GridFunction::operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

ProbabilityVector::ProbabilityVector(const GridSpec& grid, std::vector<double> masses, double tol)
    : grid_(grid), masses_(std::move(masses)) {
    if (masses_.size() != grid_.size()) throw InvalidArgument("probability vector size does not match grid");
    for (double m : masses_)
        if (!(m >= 0.0)) throw InvalidArgument("probability weights must be nonnegative and finite");
    if (std::abs(total() - 1.0) > tol)
        throw InvalidArgument("probability weights must sum to 1 (sum = " + std::to_string(total()) + ")");
}

ProbabilityVector ProbabilityVector::uniform(const GridSpec& grid) {
    return unchecked(grid, std::vector<double>(grid.size(), 1.0 / static_cast<double>(grid.size())));
}

ProbabilityVector ProbabilityVector::dirac(const GridSpec& grid, std::size_t flat_index) {
    if (flat_index >= grid.size()) throw InvalidArgument("dirac index out of range");
    std::vector<double> m(grid.size(), 0.0);
    m[flat_index] = 1.0;
    return unchecked(grid, std::move(m));
}

ProbabilityVector ProbabilityVector::gaussian(const GridSpec& grid, std::array<double, 2> center, double width) {
    if (!(width > 0.0)) throw InvalidArgument("gaussian width must be positive");
    const double p = grid.period();
    std::vector<double> dens(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        auto x = grid.position(k);
        double v = 1.0;
        for (int a = 0; a < grid.dim; ++a) {
            double s = 0.0;
            for (int w = -3; w <= 3; ++w) {
                double r = x[a] - center[a] + w * p;
                s += std::exp(-0.5 * r * r / (width * width));
            }
            v *= s;
        }
        dens[k] = v;
    }
    return from_density(grid, dens);
}

ProbabilityVector ProbabilityVector::from_density(const GridSpec& grid, std::span<const double> density) {
    if (density.size() != grid.size()) throw InvalidArgument("density size does not match grid");
    double s = 0.0;
    for (double v : density) {
        if (!(v >= 0.0)) throw InvalidArgument("density must be nonnegative");
        s += v;
    }
    if (!(s > 0.0)) throw InvalidArgument("density has zero mass");
    std::vector<double> m(density.begin(), density.end());
    for (double& v : m) v /= s;
    return unchecked(grid, std::move(m));
}

ProbabilityVector ProbabilityVector::unchecked(const GridSpec& grid, std::vector<double> masses) {
    ProbabilityVector p;
    p.grid_ = grid;
    p.masses_ = std::move(masses);
    return p;
}

double ProbabilityVector::total() const {
    double s = 0.0;
    for (double m : masses_) s += m;
    return s;
}

double ProbabilityVector::min() const { return *std::min_element(masses_.begin(), masses_.end()); }

double ProbabilityVector::integrate(const GridFunction& phi) const { return dot(masses_, phi.values()); }

ProbabilityVector mix(const ProbabilityVector& a, const ProbabilityVector& b, double lambda) {
    std::vector<double> m(a.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = (1.0 - lambda) * a[k] + lambda * b[k];
    return ProbabilityVector::unchecked(a.grid(), std::move(m));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

} // namespace tcmfg
