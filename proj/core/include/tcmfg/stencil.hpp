#pragma once

#include "tcmfg/grid.hpp"
#include "tcmfg/levy.hpp"

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

namespace tcmfg {

struct StencilEntry {
    Offset offset;  // minimal image on the torus
    double weight = 0.0;
    bool operator==(const StencilEntry&) const = default;
};

/// Finite nonnegative jump measure on grid offsets acting as
/// (L phi)(x) = sum_j w_j (phi(x + o_j h) - phi(x)).
class DiscreteLevyOp {
public:
    DiscreteLevyOp() = default;
    /// Merges duplicate offsets, drops zero offsets and zero weights, sorts by offset.
    /// Throws InvalidArgument on negative or non-finite weights.
    DiscreteLevyOp(const GridSpec& grid, double epsilon, std::vector<StencilEntry> entries);

    const GridSpec& grid() const { return grid_; }
    double epsilon() const { return epsilon_; }
    const std::vector<StencilEntry>& entries() const { return entries_; }
    /// W = sum_j w_j.
    double total_mass() const { return total_mass_; }
    /// Diagonal coefficient -W.
    double diagonal() const { return -total_mass_; }

    /// Largest displacement between an ideal atom position and its grid node.
    double snapping_error() const { return snapping_error_; }
    void set_snapping_error(double e) { snapping_error_ = e; }
    /// 4 (|c| + |a|^2 + int (1 ^ |z|^2) nu) of the approximated triplet (0 if not built from one).
    double cl_constant() const { return cl_constant_; }
    void set_cl_constant(double c) { cl_constant_ = c; }

    void apply(std::span<const double> in, std::span<double> out) const;
    GridFunction apply(const GridFunction& phi) const;
    /// Transpose: (L* m)(y) = sum_j w_j (m(y - o_j h) - m(y)).
    void apply_adjoint(std::span<const double> in, std::span<double> out) const;

    /// out(x) = sum_j w_j in(x + o_j h) without the diagonal.
    void gather(std::span<const double> in, std::span<double> out) const;

    /// LK norm of the triplet (int_{B1} z nu^eps, 0, nu^eps) on minimal-image offsets.
    double lk() const;
    /// Minimal |o_j| h over the stencil.
    double min_offset_norm() const;

    /// sum_j w_j (exp(i k . o_j h) - 1).
    std::complex<double> symbol(Vec2 k) const;

    /// CSV rows `dx,dy,weight` (1D: `dx,weight`) with a header line.
    void write_csv(std::ostream& os) const;

    bool operator==(const DiscreteLevyOp& o) const {
        return grid_ == o.grid_ && epsilon_ == o.epsilon_ && entries_ == o.entries_;
    }

private:
    GridSpec grid_{};
    double epsilon_ = 0.0;
    std::vector<StencilEntry> entries_;
    double total_mass_ = 0.0;
    double snapping_error_ = 0.0;
    double cl_constant_ = 0.0;
};

/// Transposed stencil: offsets negated, same weights.
DiscreteLevyOp adjoint(const DiscreteLevyOp& op);

enum class Compensator {
    /// Small-jump compensator on the epsilon shell matching the first moment of the binned
    /// small jumps and the second moment dropped inside the epsilon ball.
    moment_matched,
    /// Reflected, rescaled small jumps: each bin z with eps <= |z| < 1 sends mass |z|/eps to the shell node in direction -z.
    reflected,
};

struct EpsilonOptions {
    Compensator compensator = Compensator::moment_matched;
    /// Jumps are binned up to this many torus periods; beyond it their mass is spread uniformly. 0 selects the default.
    double far_periods = 0.0;
    int gauss_points = 8;
};

/// Default far-field cutoff in periods for the given dimension.
double default_far_periods(int dim);

/// Epsilon approximation of a Levy operator by a finite stencil supported outside B_eps.
/// Throws ResolutionError if eps is below the grid spacing, InvalidArgument if eps is outside (0, 1).
DiscreteLevyOp build_epsilon_approx(const LevyTriplet& triplet, double eps, const GridSpec& grid,
                                    const EpsilonOptions& options = {});

} // namespace tcmfg
