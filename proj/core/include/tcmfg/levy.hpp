#pragma once

#include <array>
#include <memory>
#include <vector>

namespace tcmfg {

using Vec2 = std::array<double, 2>;
/// Column-major 2x2 matrix: cols[i] is the column a_i.
using Mat2 = std::array<Vec2, 2>;

struct JumpAtom {
    Vec2 location{};
    double mass = 0.0;
};

/// One-dimensional stable measure along a coordinate axis: intensity |t|^{-1-2 sigma} dt.
struct AxisStable {
    int axis = 0;
    double sigma = 0.5;
    double intensity = 1.0;
};

struct CgmyParams {
    double C = 1.0;
    double G = 1.0;
    double M = 1.0;
    double Y = 0.5;
};

enum class MeasureKind { none, stable, cgmy, atoms, anisotropic, truncated };

/// Jump measure of a Levy triplet. Small/large jumps split at radius 1.
///
/// stable:      intensity |z|^{-d-2 sigma} dz (isotropic in d dimensions)
/// cgmy:        C e^{-G|z|} |z|^{-1-Y} on z<0, C e^{-M z} z^{-1-Y} on z>0, along the first axis
/// atoms:       finite sum of point masses away from the origin
/// anisotropic: sum of axis-aligned one-dimensional stable measures
/// truncated:   inner measure restricted to the open ball of the given radius
class LevyMeasureSpec {
public:
    LevyMeasureSpec() = default;

    static LevyMeasureSpec none() { return {}; }
    static LevyMeasureSpec stable(double sigma, double intensity);
    /// Measure of (-Delta)^sigma in dimension d, scaled by `scale`.
    static LevyMeasureSpec fractional_laplacian(int dim, double sigma, double scale = 1.0);
    static LevyMeasureSpec cgmy(CgmyParams p);
    static LevyMeasureSpec atoms(std::vector<JumpAtom> atoms);
    static LevyMeasureSpec anisotropic(std::vector<AxisStable> axes);
    static LevyMeasureSpec truncated(LevyMeasureSpec inner, double radius);

    MeasureKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    double intensity() const { return intensity_; }
    const CgmyParams& cgmy_params() const { return cgmy_; }
    const std::vector<JumpAtom>& atom_list() const { return atoms_; }
    const std::vector<AxisStable>& axis_list() const { return axes_; }
    const LevyMeasureSpec& inner() const { return *inner_; }
    double radius() const { return radius_; }

    /// True when nu(A) = nu(-A) for every A inside the unit ball.
    bool symmetric_at_origin() const;

private:
    MeasureKind kind_ = MeasureKind::none;
    double sigma_ = 0.0;
    double intensity_ = 0.0;
    CgmyParams cgmy_{};
    std::vector<JumpAtom> atoms_;
    std::vector<AxisStable> axes_;
    std::shared_ptr<const LevyMeasureSpec> inner_;
    double radius_ = 0.0;
};

/// Generator data: L phi = c.grad phi + tr(a a^T D^2 phi) + int (phi(x+z) - phi(x) - 1_{|z|<1} z.grad phi) nu(dz).
struct LevyTriplet {
    int dim = 1;
    Vec2 drift{};
    Mat2 diffusion{};
    LevyMeasureSpec jump{};

    /// Throws InvalidMeasure if parameters are out of range or the measure does not fit the dimension.
    void validate() const;
};

LevyTriplet pure_jump(int dim, LevyMeasureSpec jump);

/// Normalizing constant of (-Delta)^sigma: density c |z|^{-d-2 sigma}.
double fractional_constant(int dim, double sigma);
/// Surface measure of the unit sphere in R^d (K_1 = 2, K_2 = 2 pi).
double sphere_measure(int dim);

/// nu(|z| >= r).
double tail_mass(const LevyMeasureSpec& nu, int dim, double r);
/// int_{|z|<r} |z|^2 nu(dz).
double second_moment(const LevyMeasureSpec& nu, int dim, double r);
/// int_{r0 <= |z| < r1} z nu(dz).
Vec2 first_moment(const LevyMeasureSpec& nu, int dim, double r0, double r1);
/// int_{r0 <= |z| < r1} |z|^power nu(dz).
double radial_moment(const LevyMeasureSpec& nu, int dim, double power, double r0, double r1);
/// int (1 ^ |z|^2) nu(dz).
double levy_integral(const LevyMeasureSpec& nu, int dim);

/// |c| + |a|^2 + 1/2 int_{B1} |z|^2 nu + 2 nu(B1^c). Throws InvalidMeasure if divergent.
double lk_norm(const LevyTriplet& t);

/// Constant K with int_{B1} (1 ^ |z|^p / r^p) nu(dz) <= K r^{-2 sigma} / (p - 2 sigma) for p in (2 sigma, 1], r in (0, 1].
/// Closed form for the stable measure; otherwise the maximum over a sample grid of (p, r).
double la_constant(const LevyMeasureSpec& nu, int dim, double two_sigma);

/// Sufficient bound of Lphi in sup norm given [phi]_p and ||phi||_inf (stable-type measures with 2 sigma < p <= 1).
double holder_sup_bound(const LevyMeasureSpec& nu, int dim, double two_sigma, double p, double seminorm, double sup);
/// Bound of [L phi]_{p - 2 sigma} given [phi]_p.
double holder_seminorm_bound(const LevyMeasureSpec& nu, int dim, double two_sigma, double p, double seminorm);

} // namespace tcmfg
