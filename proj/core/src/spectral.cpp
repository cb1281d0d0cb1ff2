#include "tcmfg/spectral.hpp"

#include "tcmfg/detail/measure_parts.hpp"
#include "tcmfg/error.hpp"
#include "tcmfg/stencil.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace tcmfg {
namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

void run_fft(const GridSpec& grid, std::vector<Complex>& data, int sign) {
    if (data.size() != grid.size()) throw InvalidArgument("fft: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    const int n = static_cast<int>(grid.points);
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = grid.dim == 1 ? fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE)
                             : fftw_plan_dft_2d(n, n, p, p, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
}

/// int_0^b f(t) dt for an integrand oscillating with frequency k and possibly singular at 0.
double oscillatory_integral(const std::function<double(double)>& f, double b, double k) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double period = k > 0.0 ? 2.0 * std::numbers::pi / k : b;
    const double first = std::min(b, period / 4.0);
    double acc = ts.integrate(f, 0.0, first);
    const auto& g = detail::gauss_legendre(16);
    const double panel = period / 4.0;
    for (double a = first; a < b; a += panel) {
        const double e = std::min(b, a + panel);
        const double c = 0.5 * (a + e), half = 0.5 * (e - a);
        double s = 0.0;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) s += g.weights[q] * f(c + half * g.nodes[q]);
        acc += s * half;
    }
    return acc;
}

Complex cgmy_symbol(const CgmyParams& p, double k) {
    const Complex i(0.0, 1.0);
    const double gy = std::tgamma(-p.Y);
    Complex psi = p.C * gy *
                  (std::pow(Complex(p.M, 0.0) - i * k, p.Y) - std::pow(p.M, p.Y) + std::pow(Complex(p.G, 0.0) + i * k, p.Y) -
                   std::pow(p.G, p.Y));
    detail::AxisPart a;
    a.form = detail::AxisPart::Form::cgmy;
    a.cgmy = p;
    if (p.Y < 1.0) {
        const double m = a.moment(1.0, 0.0, 1.0, +1) - a.moment(1.0, 0.0, 1.0, -1);
        psi -= i * k * m;
    } else {
        psi += i * k * p.C * gy * p.Y * (std::pow(p.M, p.Y - 1.0) - std::pow(p.G, p.Y - 1.0));
        const double m = a.moment(1.0, 1.0, detail::kInf, +1) - a.moment(1.0, 1.0, detail::kInf, -1);
        psi += i * k * m;
    }
    return psi;
}

Complex axis_symbol(const detail::AxisPart& a, double k) {
    const bool untruncated = std::isinf(a.cap);
    if (untruncated && a.form == detail::AxisPart::Form::stable)
        return -(a.intensity / fractional_constant(1, a.sigma)) * std::pow(std::abs(k), 2.0 * a.sigma);
    if (untruncated) return cgmy_symbol(a.cgmy, k);
    const double ak = std::abs(k);
    auto re = [&](double t) {
        const double c = ak * t < 1e-4 ? -0.5 * ak * ak * t * t : std::cos(k * t) - 1.0;
        return c * (a.density(t) + a.density(-t));
    };
    double re_part = oscillatory_integral(re, a.cap, ak);
    double im_part = 0.0;
    if (!a.symmetric()) {
        auto im = [&](double t) {
            const double s = std::sin(k * t) - (t < 1.0 ? k * t : 0.0);
            return s * (a.density(t) - a.density(-t));
        };
        im_part = oscillatory_integral(im, a.cap, ak);
    }
    return {re_part, im_part};
}

Complex radial_symbol(const detail::RadialPart& p, double k) {
    if (std::isinf(p.cap)) return -(p.intensity / fractional_constant(2, p.sigma)) * std::pow(k, 2.0 * p.sigma);
    auto f = [&](double r) {
        const double x = k * r;
        const double j = x < 1e-4 ? -0.25 * x * x : boost::math::cyl_bessel_j(0, x) - 1.0;
        return 2.0 * std::numbers::pi * j * p.density(r) * r;
    };
    return oscillatory_integral(f, p.cap, k);
}

} // namespace

void fft_forward(const GridSpec& grid, std::vector<Complex>& data) { run_fft(grid, data, FFTW_FORWARD); }

void fft_inverse(const GridSpec& grid, std::vector<Complex>& data) {
    run_fft(grid, data, FFTW_BACKWARD);
    const double s = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= s;
}

Vec2 wave_vector(const GridSpec& grid, std::size_t flat) {
    const auto n = static_cast<long long>(grid.points);
    const double base = 2.0 * std::numbers::pi / grid.period();
    auto freq = [&](long long j) { return base * static_cast<double>(j < n / 2 ? j : j - n); };
    if (grid.dim == 1) return {freq(static_cast<long long>(flat)), 0.0};
    return {freq(static_cast<long long>(flat / grid.points)), freq(static_cast<long long>(flat % grid.points))};
}

Complex levy_symbol(const LevyTriplet& t, Vec2 k) {
    const Complex i(0.0, 1.0);
    Complex psi = i * (t.drift[0] * k[0] + t.drift[1] * k[1]);
    for (const auto& col : t.diffusion) {
        const double ak = col[0] * k[0] + col[1] * k[1];
        psi -= ak * ak;
    }
    const auto parts = detail::decompose(t.jump, t.dim);
    for (const auto& a : parts.axes) psi += axis_symbol(a, k[static_cast<std::size_t>(a.axis)]);
    for (const auto& p : parts.radial) psi += radial_symbol(p, std::hypot(k[0], k[1]));
    for (const auto& at : parts.atoms) {
        const double ph = k[0] * at.location[0] + k[1] * at.location[1];
        const double r = std::hypot(at.location[0], at.location[1]);
        psi += at.mass * (Complex(std::cos(ph) - 1.0, std::sin(ph)) - (r < 1.0 ? i * ph : Complex{}));
    }
    if (!std::isfinite(psi.real()) || !std::isfinite(psi.imag())) throw SymbolError("Levy symbol is not finite");
    return psi;
}

SymbolFn symbol_of(const LevyTriplet& t) {
    t.validate();
    return [t](Vec2 k) { return levy_symbol(t, k); };
}

SymbolFn symbol_of(const DiscreteLevyOp& op) {
    return [op](Vec2 k) { return op.symbol(k); };
}

GridFunction spectral_reference(const SymbolFn& symbol, const GridFunction& phi, double t, bool adjoint) {
    const auto& g = phi.grid();
    if (t == 0.0) return phi;
    std::vector<Complex> data(phi.values().begin(), phi.values().end());
    fft_forward(g, data);
    for (std::size_t k = 0; k < data.size(); ++k) {
        Complex psi = symbol(wave_vector(g, k));
        if (adjoint) psi = std::conj(psi);
        const Complex f = std::exp(t * psi);
        if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) throw SymbolError("semigroup factor diverged");
        data[k] *= f;
    }
    fft_inverse(g, data);
    GridFunction out(g);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = data[k].real();
    return out;
}

GridFunction spectral_reference(const LevyTriplet& triplet, const GridFunction& phi, double t, bool adjoint) {
    return spectral_reference(symbol_of(triplet), phi, t, adjoint);
}

std::vector<double> circular_convolution(const GridSpec& grid, std::span<const double> a, std::span<const double> b) {
    std::vector<Complex> fa(a.begin(), a.end()), fb(b.begin(), b.end());
    fft_forward(grid, fa);
    fft_forward(grid, fb);
    for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
    fft_inverse(grid, fa);
    std::vector<double> out(fa.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = fa[k].real();
    return out;
}

} // namespace tcmfg
