#pragma once

#include "tcmfg/levy.hpp"

#include <limits>
#include <vector>

namespace tcmfg::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One-dimensional density along a coordinate axis, possibly asymmetric, cut at |t| < cap.
struct AxisPart {
    enum class Form { stable, cgmy };
    int axis = 0;
    Form form = Form::stable;
    double sigma = 0.5;      // stable
    double intensity = 1.0;  // stable
    CgmyParams cgmy{};
    double cap = kInf;

    /// Density at signed coordinate t != 0.
    double density(double t) const;
    /// int_{r0 <= t < r1} t^power nu on the side `side` (+1 or -1), with t > 0 the distance.
    double moment(double power, double r0, double r1, int side) const;
    bool symmetric() const { return form == Form::stable || cgmy.G == cgmy.M; }
};

/// Isotropic stable density intensity |z|^{-2-2 sigma} on R^2, cut at |z| < cap.
struct RadialPart {
    double sigma = 0.5;
    double intensity = 1.0;
    double cap = kInf;

    double density(double r) const;
    /// int_{r0 <= |z| < r1} |z|^power nu(dz).
    double moment(double power, double r0, double r1) const;
    /// int over the square [-s, s]^2 of z_1^2 nu(dz) (equal to the z_2^2 integral).
    double box_axis_second_moment(double s) const;
};

struct MeasureParts {
    std::vector<AxisPart> axes;
    std::vector<RadialPart> radial;
    std::vector<JumpAtom> atoms;
};

MeasureParts decompose(const LevyMeasureSpec& nu, int dim);

/// int_a^b t^e dt for 0 <= a < b <= inf; +inf when divergent.
double power_integral(double e, double a, double b);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

} // namespace tcmfg::detail
