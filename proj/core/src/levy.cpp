#include "tcmfg/levy.hpp"

#include "tcmfg/detail/measure_parts.hpp"
#include "tcmfg/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tcmfg {
namespace detail {
namespace {

template <unsigned N>
GaussRule make_rule() {
    using Q = boost::math::quadrature::gauss<double, N>;
    GaussRule r;
    const auto& x = Q::abscissa();
    const auto& w = Q::weights();
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] == 0.0) continue;
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
    }
    if (N % 2 == 1) {
        r.nodes.push_back(0.0);
        r.weights.push_back(w[0]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

double finite_integral(const auto& f, double a, double b) {
    if (!(b > a)) return 0.0;
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b);
}

double ray_integral(const auto& f, double a) {
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate([&](double s) { return f(a + s); }, 0.0, std::numeric_limits<double>::infinity());
}

} // namespace

const GaussRule& gauss_legendre(int n) {
    static const GaussRule r2 = make_rule<2>();
    static const GaussRule r4 = make_rule<4>();
    static const GaussRule r8 = make_rule<8>();
    static const GaussRule r16 = make_rule<16>();
    switch (n) {
    case 2: return r2;
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    default: throw InvalidArgument("unsupported Gauss-Legendre order " + std::to_string(n));
    }
}

double power_integral(double e, double a, double b) {
    if (!(b > a)) return 0.0;
    if (std::isinf(b)) {
        if (e >= -1.0 || a <= 0.0) return kInf;
        return -std::pow(a, e + 1.0) / (e + 1.0);
    }
    if (e == -1.0) return a <= 0.0 ? kInf : std::log(b / a);
    if (e < -1.0 && a <= 0.0) return kInf;
    return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

double AxisPart::density(double t) const {
    const double r = std::abs(t);
    if (r == 0.0 || r >= cap) return 0.0;
    if (form == Form::stable) return intensity * std::pow(r, -1.0 - 2.0 * sigma);
    const double rate = t > 0 ? cgmy.M : cgmy.G;
    return cgmy.C * std::exp(-rate * r) * std::pow(r, -1.0 - cgmy.Y);
}

double AxisPart::moment(double power, double r0, double r1, int side) const {
    const double b = std::min(r1, cap);
    if (!(b > r0)) return 0.0;
    if (form == Form::stable) return intensity * power_integral(power - 1.0 - 2.0 * sigma, r0, b);
    if (cgmy.C == 0.0) return 0.0;
    const double e = power - 1.0 - cgmy.Y;
    if (r0 <= 0.0 && e <= -1.0) return kInf;
    const double rate = side > 0 ? cgmy.M : cgmy.G;
    auto f = [&](double t) { return t <= 0.0 ? 0.0 : std::pow(t, e) * std::exp(-rate * t); };
    double v = 0.0;
    if (std::isinf(b)) {
        const double split = std::max(r0, 1.0);
        v = finite_integral(f, r0, split) + ray_integral(f, split);
    } else {
        v = finite_integral(f, r0, b);
    }
    return cgmy.C * v;
}

double RadialPart::density(double r) const {
    if (r == 0.0 || r >= cap) return 0.0;
    return intensity * std::pow(r, -2.0 - 2.0 * sigma);
}

double RadialPart::moment(double power, double r0, double r1) const {
    const double b = std::min(r1, cap);
    if (!(b > r0)) return 0.0;
    return 2.0 * std::numbers::pi * intensity * power_integral(power - 1.0 - 2.0 * sigma, r0, b);
}

double RadialPart::box_axis_second_moment(double s) const {
    const auto& g = gauss_legendre(16);
    const double q = std::numbers::pi / 4.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double th = q * 0.5 * (g.nodes[i] + 1.0);
        const double rmax = std::min(s / std::cos(th), cap);
        acc += g.weights[i] * std::pow(rmax, 2.0 - 2.0 * sigma) / (2.0 - 2.0 * sigma);
    }
    acc *= q * 0.5;
    return 0.5 * 8.0 * intensity * acc;
}

MeasureParts decompose(const LevyMeasureSpec& nu, int dim) {
    MeasureParts parts;
    switch (nu.kind()) {
    case MeasureKind::none: break;
    case MeasureKind::stable:
        if (dim == 1) {
            AxisPart a;
            a.sigma = nu.sigma();
            a.intensity = nu.intensity();
            parts.axes.push_back(a);
        } else {
            parts.radial.push_back(RadialPart{nu.sigma(), nu.intensity(), kInf});
        }
        break;
    case MeasureKind::cgmy: {
        AxisPart a;
        a.form = AxisPart::Form::cgmy;
        a.cgmy = nu.cgmy_params();
        parts.axes.push_back(a);
        break;
    }
    case MeasureKind::atoms: parts.atoms = nu.atom_list(); break;
    case MeasureKind::anisotropic:
        for (const auto& s : nu.axis_list()) {
            AxisPart a;
            a.axis = s.axis;
            a.sigma = s.sigma;
            a.intensity = s.intensity;
            parts.axes.push_back(a);
        }
        break;
    case MeasureKind::truncated: {
        parts = decompose(nu.inner(), dim);
        const double r = nu.radius();
        for (auto& a : parts.axes) a.cap = std::min(a.cap, r);
        for (auto& p : parts.radial) p.cap = std::min(p.cap, r);
        std::erase_if(parts.atoms, [r](const JumpAtom& a) { return std::hypot(a.location[0], a.location[1]) >= r; });
        break;
    }
    }
    return parts;
}

} // namespace detail

using detail::kInf;

LevyMeasureSpec LevyMeasureSpec::stable(double sigma, double intensity) {
    LevyMeasureSpec s;
    s.kind_ = MeasureKind::stable;
    s.sigma_ = sigma;
    s.intensity_ = intensity;
    return s;
}

LevyMeasureSpec LevyMeasureSpec::fractional_laplacian(int dim, double sigma, double scale) {
    return stable(sigma, scale * fractional_constant(dim, sigma));
}

LevyMeasureSpec LevyMeasureSpec::cgmy(CgmyParams p) {
    LevyMeasureSpec s;
    s.kind_ = MeasureKind::cgmy;
    s.cgmy_ = p;
    return s;
}

LevyMeasureSpec LevyMeasureSpec::atoms(std::vector<JumpAtom> atoms) {
    LevyMeasureSpec s;
    s.kind_ = MeasureKind::atoms;
    s.atoms_ = std::move(atoms);
    return s;
}

LevyMeasureSpec LevyMeasureSpec::anisotropic(std::vector<AxisStable> axes) {
    LevyMeasureSpec s;
    s.kind_ = MeasureKind::anisotropic;
    s.axes_ = std::move(axes);
    return s;
}

LevyMeasureSpec LevyMeasureSpec::truncated(LevyMeasureSpec inner, double radius) {
    LevyMeasureSpec s;
    s.kind_ = MeasureKind::truncated;
    s.inner_ = std::make_shared<const LevyMeasureSpec>(std::move(inner));
    s.radius_ = radius;
    return s;
}

bool LevyMeasureSpec::symmetric_at_origin() const {
    switch (kind_) {
    case MeasureKind::none:
    case MeasureKind::stable:
    case MeasureKind::anisotropic: return true;
    case MeasureKind::cgmy: return cgmy_.G == cgmy_.M;
    case MeasureKind::truncated: return inner_->symmetric_at_origin();
    case MeasureKind::atoms:
        for (const auto& a : atoms_) {
            if (std::hypot(a.location[0], a.location[1]) >= 1.0) continue;
            double mirrored = 0.0;
            for (const auto& b : atoms_)
                if (b.location[0] == -a.location[0] && b.location[1] == -a.location[1]) mirrored += b.mass;
            double same = 0.0;
            for (const auto& b : atoms_)
                if (b.location == a.location) same += b.mass;
            if (std::abs(mirrored - same) > 1e-14 * std::max(1.0, same)) return false;
        }
        return true;
    }
    return true;
}

namespace {

void validate_measure(const LevyMeasureSpec& nu, int dim) {
    auto bad = [](const std::string& m) { throw InvalidMeasure(m); };
    switch (nu.kind()) {
    case MeasureKind::none: break;
    case MeasureKind::stable:
        if (!(nu.sigma() > 0.0 && nu.sigma() < 1.0)) bad("stable measure needs sigma in (0, 1)");
        if (!(nu.intensity() >= 0.0) || !std::isfinite(nu.intensity())) bad("stable intensity must be finite and >= 0");
        break;
    case MeasureKind::cgmy: {
        const auto& p = nu.cgmy_params();
        if (!(p.C >= 0.0) || !std::isfinite(p.C)) bad("CGMY needs C >= 0");
        if (!(p.G > 0.0) || !(p.M > 0.0)) bad("CGMY needs G > 0 and M > 0");
        if (!(p.Y > 0.0 && p.Y < 2.0) || p.Y == 1.0) bad("CGMY needs Y in (0, 2), Y != 1");
        break;
    }
    case MeasureKind::atoms:
        for (const auto& a : nu.atom_list()) {
            if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) bad("atom masses must be finite and >= 0");
            if (!std::isfinite(a.location[0]) || !std::isfinite(a.location[1])) bad("atom locations must be finite");
            if (a.location[0] == 0.0 && a.location[1] == 0.0) bad("atom at the origin");
            if (dim == 1 && a.location[1] != 0.0) bad("atom has a second coordinate in 1D");
        }
        break;
    case MeasureKind::anisotropic:
        if (nu.axis_list().empty()) bad("anisotropic measure needs at least one axis");
        for (const auto& s : nu.axis_list()) {
            if (s.axis < 0 || s.axis >= dim) bad("anisotropic axis out of range");
            if (!(s.sigma > 0.0 && s.sigma < 1.0)) bad("anisotropic component needs sigma in (0, 1)");
            if (!(s.intensity >= 0.0) || !std::isfinite(s.intensity)) bad("anisotropic intensity must be finite and >= 0");
        }
        break;
    case MeasureKind::truncated:
        if (!(nu.radius() > 0.0)) bad("truncation radius must be positive");
        validate_measure(nu.inner(), dim);
        break;
    }
}

} // namespace

void LevyTriplet::validate() const {
    if (dim != 1 && dim != 2) throw InvalidMeasure("dimension must be 1 or 2");
    for (double v : drift)
        if (!std::isfinite(v)) throw InvalidMeasure("drift must be finite");
    for (const auto& col : diffusion)
        for (double v : col)
            if (!std::isfinite(v)) throw InvalidMeasure("diffusion must be finite");
    if (dim == 1 && (drift[1] != 0.0 || diffusion[0][1] != 0.0 || diffusion[1][0] != 0.0 || diffusion[1][1] != 0.0))
        throw InvalidMeasure("1D triplet has second-axis entries");
    validate_measure(jump, dim);
}

LevyTriplet pure_jump(int dim, LevyMeasureSpec jump) {
    LevyTriplet t;
    t.dim = dim;
    t.jump = std::move(jump);
    return t;
}

double sphere_measure(int dim) {
    const double h = 0.5 * dim;
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double fractional_constant(int dim, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in (0, 1)");
    const double h = 0.5 * dim;
    return std::pow(4.0, sigma) * std::tgamma(h + sigma) / (std::pow(std::numbers::pi, h) * std::abs(std::tgamma(-sigma)));
}

double radial_moment(const LevyMeasureSpec& nu, int dim, double power, double r0, double r1) {
    const auto parts = detail::decompose(nu, dim);
    double acc = 0.0;
    for (const auto& a : parts.axes) acc += a.moment(power, r0, r1, +1) + a.moment(power, r0, r1, -1);
    for (const auto& p : parts.radial) acc += p.moment(power, r0, r1);
    for (const auto& a : parts.atoms) {
        const double r = std::hypot(a.location[0], a.location[1]);
        if (r >= r0 && r < r1) acc += a.mass * std::pow(r, power);
    }
    return acc;
}

double tail_mass(const LevyMeasureSpec& nu, int dim, double r) { return radial_moment(nu, dim, 0.0, r, kInf); }

double second_moment(const LevyMeasureSpec& nu, int dim, double r) { return radial_moment(nu, dim, 2.0, 0.0, r); }

Vec2 first_moment(const LevyMeasureSpec& nu, int dim, double r0, double r1) {
    const auto parts = detail::decompose(nu, dim);
    Vec2 m{};
    for (const auto& a : parts.axes) {
        if (a.symmetric()) continue;
        m[static_cast<std::size_t>(a.axis)] += a.moment(1.0, r0, r1, +1) - a.moment(1.0, r0, r1, -1);
    }
    for (const auto& a : parts.atoms) {
        const double r = std::hypot(a.location[0], a.location[1]);
        if (r >= r0 && r < r1) {
            m[0] += a.mass * a.location[0];
            m[1] += a.mass * a.location[1];
        }
    }
    return m;
}

double levy_integral(const LevyMeasureSpec& nu, int dim) { return second_moment(nu, dim, 1.0) + tail_mass(nu, dim, 1.0); }

double lk_norm(const LevyTriplet& t) {
    t.validate();
    const double c = std::hypot(t.drift[0], t.drift[1]);
    double a2 = 0.0;
    for (const auto& col : t.diffusion)
        for (double v : col) a2 += v * v;
    const double small = second_moment(t.jump, t.dim, 1.0);
    const double large = tail_mass(t.jump, t.dim, 1.0);
    if (!std::isfinite(small) || !std::isfinite(large))
        throw InvalidMeasure("jump measure does not integrate 1 ^ |z|^2");
    return c + a2 + 0.5 * small + 2.0 * large;
}

double la_constant(const LevyMeasureSpec& nu, int dim, double two_sigma) {
    if (!(two_sigma > 0.0 && two_sigma < 1.0)) throw InvalidArgument("two_sigma must lie in (0, 1)");
    if (nu.kind() == MeasureKind::stable && std::abs(2.0 * nu.sigma() - two_sigma) < 1e-15)
        return nu.intensity() * sphere_measure(dim) / two_sigma;
    double best = 0.0;
    for (int ip = 1; ip <= 16; ++ip) {
        const double p = two_sigma + (1.0 - two_sigma) * ip / 16.0;
        for (int ir = 0; ir <= 40; ++ir) {
            const double r = std::pow(10.0, -6.0 + 6.0 * ir / 40.0);
            const double inner = radial_moment(nu, dim, p, 0.0, r) / std::pow(r, p);
            const double outer = radial_moment(nu, dim, 0.0, r, 1.0);
            best = std::max(best, (p - two_sigma) * std::pow(r, two_sigma) * (inner + outer));
        }
    }
    return best;
}

double holder_sup_bound(const LevyMeasureSpec& nu, int dim, double two_sigma, double p, double seminorm, double sup) {
    if (!(p > two_sigma && p <= 1.0)) throw InvalidArgument("exponent must lie in (2 sigma, 1]");
    const double k = la_constant(nu, dim, two_sigma);
    return k * seminorm / (p - two_sigma) + 2.0 * sup * tail_mass(nu, dim, 1.0);
}

double holder_seminorm_bound(const LevyMeasureSpec& nu, int dim, double two_sigma, double p, double seminorm) {
    if (!(p > two_sigma && p <= 1.0)) throw InvalidArgument("exponent must lie in (2 sigma, 1]");
    const double k = la_constant(nu, dim, two_sigma);
    return 2.0 * (k / (p - two_sigma) + tail_mass(nu, dim, 1.0)) * seminorm;
}

} // namespace tcmfg
