#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

namespace tcmfg {

/// Periodic truncation [-R, R)^d of the spatial domain plus the time grid of [0, T].
struct GridSpec {
    int dim = 1;               // 1 or 2
    double half_width = 4.0;   // R
    std::size_t points = 256;  // N per axis, a power of two
    double horizon = 1.0;      // T
    std::size_t steps = 100;   // M

    double spacing() const { return 2.0 * half_width / static_cast<double>(points); }
    double period() const { return 2.0 * half_width; }
    double dt() const { return horizon / static_cast<double>(steps); }
    double cell_volume() const;
    std::size_t size() const;
    double time(std::size_t n) const { return horizon * static_cast<double>(n) / static_cast<double>(steps); }

    /// Coordinate of node i along an axis: -R + i h.
    double coordinate(std::size_t i) const { return -half_width + static_cast<double>(i) * spacing(); }
    /// Physical position of a flat node index (second entry is 0 in 1D).
    std::array<double, 2> position(std::size_t flat) const;
    std::size_t flat(std::size_t i, std::size_t j = 0) const { return dim == 1 ? i : i * points + j; }

    /// Throws InvalidArgument unless the spec is usable (d in {1,2}, N power of two, h < 1, T > 0, M > 0).
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Integer displacement on the grid, in units of h. dy is 0 in 1D.
struct Offset {
    int dx = 0;
    int dy = 0;
    auto operator<=>(const Offset&) const = default;
};

/// Canonical representative of an offset on the torus, components in [-N/2, N/2).
Offset wrap(Offset o, const GridSpec& grid);
/// Flat index of node (index + offset) on the torus.
std::size_t shift_index(std::size_t flat, Offset o, const GridSpec& grid);

/// Real field sampled at the grid nodes.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const GridSpec& grid, double fill = 0.0);
    GridFunction(const GridSpec& grid, std::vector<double> values);

    template <class F>
    static GridFunction sample(const GridSpec& grid, F&& f) {
        GridFunction g(grid);
        for (std::size_t k = 0; k < g.size(); ++k) {
            auto p = grid.position(k);
            if constexpr (std::is_invocable_v<F&, double>) g[k] = f(p[0]);
            else g[k] = f(p[0], p[1]);
        }
        return g;
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double sup_norm() const;
    double min() const;
    double max() const;
    bool all_finite() const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double s);
    GridFunction& operator+=(double c);

private:
    GridSpec grid_{};
    std::vector<double> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// Probability weights on the grid cells (cell masses, not densities).
class ProbabilityVector {
public:
    ProbabilityVector() = default;
    /// Takes cell masses; throws InvalidArgument if any is negative or the sum is not 1 within tol.
    ProbabilityVector(const GridSpec& grid, std::vector<double> masses, double tol = 1e-12);

    static ProbabilityVector uniform(const GridSpec& grid);
    static ProbabilityVector dirac(const GridSpec& grid, std::size_t flat_index);
    /// Periodized Gaussian density sampled at the nodes, normalized to unit mass.
    static ProbabilityVector gaussian(const GridSpec& grid, std::array<double, 2> center, double width);
    /// Normalizes nonnegative node densities into cell masses.
    static ProbabilityVector from_density(const GridSpec& grid, std::span<const double> density);
    /// Wraps masses without normalization checks (used by solvers, which track drift themselves).
    static ProbabilityVector unchecked(const GridSpec& grid, std::vector<double> masses);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return masses_.size(); }
    double operator[](std::size_t k) const { return masses_[k]; }
    std::span<const double> masses() const { return masses_; }
    std::span<double> mutable_masses() { return masses_; }

    double total() const;
    double min() const;
    /// m[phi] = sum_k m_k phi_k.
    double integrate(const GridFunction& phi) const;

private:
    GridSpec grid_{};
    std::vector<double> masses_;
};

/// Convex combination (1 - lambda) a + lambda b.
ProbabilityVector mix(const ProbabilityVector& a, const ProbabilityVector& b, double lambda);

/// Pairing sum_k a_k b_k in a fixed order.
double dot(std::span<const double> a, std::span<const double> b);

} // namespace tcmfg
