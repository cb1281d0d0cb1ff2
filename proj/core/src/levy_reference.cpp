#include "tcmfg/levy_reference.hpp"

#include "tcmfg/detail/measure_parts.hpp"
#include "tcmfg/error.hpp"
#include "tcmfg/parallel.hpp"
#include "tcmfg/stencil.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tcmfg {
namespace {

std::array<std::array<double, 7>, 5> fornberg() {
    constexpr int n = 7;
    constexpr int mmax = 4;
    double x[n];
    for (int i = 0; i < n; ++i) x[i] = i - 3;
    double c[n][mmax + 1] = {};
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, mmax);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::array<std::array<double, 7>, 5> w{};
    for (int m = 0; m <= mmax; ++m)
        for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = c[j][m];
    return w;
}

std::array<double, 5> lagrange5(double u) {
    std::array<double, 5> l{};
    for (int j = -2; j <= 2; ++j) {
        double p = 1.0;
        for (int m = -2; m <= 2; ++m)
            if (m != j) p *= (u - m) / static_cast<double>(j - m);
        l[static_cast<std::size_t>(j + 2)] = p;
    }
    return l;
}

struct Kernel {
    const GridSpec& g;
    std::vector<double> w;
    explicit Kernel(const GridSpec& grid) : g(grid), w(grid.size(), 0.0) {}
    std::size_t index(long long dx, long long dy) const {
        const auto n = static_cast<long long>(g.points);
        auto mod = [n](long long v) { return static_cast<std::size_t>(((v % n) + n) % n); };
        return g.dim == 1 ? mod(dx) : mod(dx) * g.points + mod(dy);
    }
    /// Adds mass at the continuous position (ux, uy) in cell units.
    void add(double ux, double uy, double mass) {
        const double kx = std::round(ux), ky = std::round(uy);
        const auto lx = lagrange5(ux - kx);
        if (g.dim == 1) {
            for (int j = 0; j < 5; ++j) w[index(static_cast<long long>(kx) + j - 2, 0)] += mass * lx[static_cast<std::size_t>(j)];
            return;
        }
        const auto ly = lagrange5(uy - ky);
        for (int a = 0; a < 5; ++a) {
            if (lx[static_cast<std::size_t>(a)] == 0.0) continue;
            for (int b = 0; b < 5; ++b)
                w[index(static_cast<long long>(kx) + a - 2, static_cast<long long>(ky) + b - 2)] +=
                    mass * lx[static_cast<std::size_t>(a)] * ly[static_cast<std::size_t>(b)];
        }
    }
};

} // namespace

const std::array<double, 7>& central_weights(int order) {
    static const auto table = fornberg();
    if (order < 0 || order > 4) throw InvalidArgument("derivative order must lie in [0, 4]");
    return table[static_cast<std::size_t>(order)];
}

GridFunction derivative(const GridFunction& phi, int axis, int order) {
    const auto& g = phi.grid();
    const auto& c = central_weights(order);
    const double scale = std::pow(g.spacing(), -order);
    GridFunction out(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        double acc = 0.0;
        for (int j = -3; j <= 3; ++j) {
            const Offset o = axis == 0 ? Offset{j, 0} : Offset{0, j};
            acc += c[static_cast<std::size_t>(j + 3)] * phi[shift_index(k, o, g)];
        }
        out[k] = acc * scale;
    }
    return out;
}

ReferenceResult apply_levy_estimate(const LevyTriplet& triplet, const GridFunction& phi, const ReferenceOptions& opt) {
    triplet.validate();
    const GridSpec& g = phi.grid();
    if (triplet.dim != g.dim) throw InvalidArgument("triplet and grid dimensions differ");
    if (!phi.all_finite()) throw InvalidArgument("apply_levy: phi is not finite");
    const int dim = g.dim;
    const double h = g.spacing();
    const int kq = opt.taylor_cells;
    const double rq = (kq + 0.5) * h;
    const double periods = opt.far_periods > 0.0 ? opt.far_periods : default_far_periods(dim);
    const int kmax = static_cast<int>(std::ceil(periods * g.period() / h));
    const double rout = (kmax + 0.5) * h;
    const double osc = phi.max() - phi.min();

    Kernel kernel(g);
    double far = 0.0;
    double estimate = 0.0;
    std::array<double, 2> second{}, third{}, first{};
    double fourth_moment = 0.0;

    const auto parts = detail::decompose(triplet.jump, dim);
    for (const auto& a : parts.axes) {
        const auto ax = static_cast<std::size_t>(a.axis);
        for (int side : {+1, -1}) {
            for (int k = kq + 1; k <= kmax; ++k) {
                const double lo = (k - 0.5) * h;
                const double hi = std::min((k + 0.5) * h, a.cap);
                if (!(hi > lo)) break;
                const int n = k <= 64 ? opt.gauss_points : (k <= static_cast<int>(g.points) ? 8 : 4);
                const auto& r = detail::gauss_legendre(n);
                const auto& rh = detail::gauss_legendre(std::max(2, n / 2));
                const double c = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                double m = 0.0, mh = 0.0;
                for (std::size_t q = 0; q < r.nodes.size(); ++q) {
                    const double t = c + half * r.nodes[q];
                    const double mass = r.weights[q] * half * a.density(side * t);
                    m += mass;
                    const double u = side * t / h;
                    if (ax == 0) kernel.add(u, 0.0, mass);
                    else kernel.add(0.0, u, mass);
                }
                for (std::size_t q = 0; q < rh.nodes.size(); ++q) mh += rh.weights[q] * half * a.density(side * (c + half * rh.nodes[q]));
                estimate += std::abs(m - mh) * osc;
            }
            far += a.moment(0.0, rout, detail::kInf, side);
            second[ax] += a.moment(2.0, 0.0, rq, side);
            third[ax] += side * a.moment(3.0, 0.0, rq, side);
            first[ax] += side * (rq < 1.0 ? -a.moment(1.0, rq, 1.0, side) : a.moment(1.0, 1.0, rq, side));
            fourth_moment += a.moment(4.0, 0.0, rq, side);
        }
    }

    for (const auto& p : parts.radial) {
        for (int i = -kmax; i <= kmax; ++i) {
            for (int j = -kmax; j <= kmax; ++j) {
                const int cheb = std::max(std::abs(i), std::abs(j));
                if (cheb <= kq) continue;
                const double x0 = (i - 0.5) * h, y0 = (j - 0.5) * h;
                const double dxmin = std::max(0.0, std::abs(i) - 0.5) * h;
                const double dymin = std::max(0.0, std::abs(j) - 0.5) * h;
                if (std::hypot(dxmin, dymin) >= rout) continue;
                const int n = cheb <= 16 ? 8 : (cheb <= static_cast<int>(g.points) ? 4 : 2);
                const auto& r = detail::gauss_legendre(n);
                const auto& rh = detail::gauss_legendre(std::max(2, n / 2));
                double m = 0.0, mh = 0.0;
                for (std::size_t qa = 0; qa < r.nodes.size(); ++qa)
                    for (std::size_t qb = 0; qb < r.nodes.size(); ++qb) {
                        const double zx = x0 + 0.5 * h * (r.nodes[qa] + 1.0);
                        const double zy = y0 + 0.5 * h * (r.nodes[qb] + 1.0);
                        const double rr = std::hypot(zx, zy);
                        if (rr >= rout) continue;
                        const double mass = r.weights[qa] * r.weights[qb] * 0.25 * h * h * p.density(rr);
                        m += mass;
                        kernel.add(zx / h, zy / h, mass);
                    }
                for (std::size_t qa = 0; qa < rh.nodes.size(); ++qa)
                    for (std::size_t qb = 0; qb < rh.nodes.size(); ++qb) {
                        const double zx = x0 + 0.5 * h * (rh.nodes[qa] + 1.0);
                        const double zy = y0 + 0.5 * h * (rh.nodes[qb] + 1.0);
                        const double rr = std::hypot(zx, zy);
                        if (rr < rout) mh += rh.weights[qa] * rh.weights[qb] * 0.25 * h * h * p.density(rr);
                    }
                estimate += std::abs(m - mh) * osc;
            }
        }
        far += p.moment(0.0, rout, detail::kInf);
        const double s = p.box_axis_second_moment(rq);
        second[0] += s;
        second[1] += s;
        fourth_moment += p.moment(4.0, 0.0, std::sqrt(2.0) * rq);
    }

    for (const auto& at : parts.atoms) {
        kernel.add(at.location[0] / h, at.location[1] / h, at.mass);
        if (std::hypot(at.location[0], at.location[1]) < 1.0) {
            first[0] -= at.mass * at.location[0];
            first[1] -= at.mass * at.location[1];
        }
    }

    std::vector<GridFunction> d1, d2, d3;
    double d4max = 0.0;
    for (int ax = 0; ax < dim; ++ax) {
        d1.push_back(derivative(phi, ax, 1));
        d2.push_back(derivative(phi, ax, 2));
        d3.push_back(derivative(phi, ax, 3));
        d4max = std::max(d4max, derivative(phi, ax, 4).sup_norm());
    }
    estimate += d4max * fourth_moment / 24.0 * (dim == 2 ? 4.0 : 1.0);
    GridFunction cross;
    const auto& a = triplet.diffusion;
    const double a01 = a[0][0] * a[0][1] + a[1][0] * a[1][1];
    if (dim == 2 && a01 != 0.0) cross = derivative(d1[0], 1, 1);
    std::array<double, 2> aa{a[0][0] * a[0][0] + a[1][0] * a[1][0], a[0][1] * a[0][1] + a[1][1] * a[1][1]};

    double mean = 0.0;
    for (double v : phi.values()) mean += v;
    mean /= static_cast<double>(phi.size());

    std::vector<std::pair<std::size_t, double>> sparse;
    for (std::size_t k = 0; k < kernel.w.size(); ++k)
        if (kernel.w[k] != 0.0) sparse.emplace_back(k, kernel.w[k]);

    GridFunction out(g);
    const std::size_t n = g.points;
    const std::size_t mask = n - 1;
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t x = b; x < e; ++x) {
            double acc = 0.0;
            const double px = phi[x];
            if (dim == 1) {
                for (const auto& [k, w] : sparse) acc += w * (phi[(x + k) & mask] - px);
            } else {
                const std::size_t i = x / n, j = x % n;
                for (const auto& [k, w] : sparse) {
                    const std::size_t src = ((i + k / n) & mask) * n + ((j + k % n) & mask);
                    acc += w * (phi[src] - px);
                }
            }
            acc += far * (mean - px);
            for (int ax = 0; ax < dim; ++ax) {
                const auto s = static_cast<std::size_t>(ax);
                acc += 0.5 * second[s] * d2[s][x] + third[s] / 6.0 * d3[s][x] + first[s] * d1[s][x];
                acc += triplet.drift[s] * d1[s][x] + aa[s] * d2[s][x];
            }
            if (dim == 2 && a01 != 0.0) acc += 2.0 * a01 * cross[x];
            out[x] = acc;
        }
    });
    return {std::move(out), estimate};
}

GridFunction apply_levy(const LevyTriplet& triplet, const GridFunction& phi, const ReferenceOptions& options) {
    auto r = apply_levy_estimate(triplet, phi, options);
    const double budget = options.tolerance * std::max(1.0, phi.sup_norm());
    if (r.error_estimate > budget) {
        std::ostringstream msg;
        msg << "apply_levy: estimated quadrature error " << r.error_estimate << " exceeds " << budget;
        throw QuadratureError(msg.str(), r.error_estimate);
    }
    return std::move(r.values);
}

double apply_levy(const LevyTriplet& triplet, const ScalarFn& phi, const ScalarFn& dphi, const ScalarFn& d2phi, double x,
                  const CallableOptions& opt) {
    triplet.validate();
    if (triplet.dim != 1) throw InvalidArgument("callable apply_levy supports 1D triplets only");
    const double rt = opt.taylor_radius;
    const double p0 = phi(x), p1 = dphi(x), p2 = d2phi(x);
    double acc = triplet.drift[0] * p1 + triplet.diffusion[0][0] * triplet.diffusion[0][0] * p2;
    double err_total = 0.0;
    const auto parts = detail::decompose(triplet.jump, 1);
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    for (const auto& a : parts.axes) {
        for (int side : {+1, -1}) {
            acc += 0.5 * p2 * a.moment(2.0, 0.0, rt, side);
            acc -= p1 * side * a.moment(1.0, rt, 1.0, side);
            auto f = [&](double t) { return (phi(x + side * t) - p0) * a.density(side * t); };
            // Cuts at 1 and at the jumps landing on a feature point of phi.
            std::vector<double> cuts{rt};
            if (a.cap > 1.0) cuts.push_back(1.0);
            for (double feature : opt.features) {
                const double t = side * (feature - x);
                if (t > rt && t < a.cap) cuts.push_back(t);
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            for (std::size_t i = 0; i < cuts.size(); ++i) {
                const double lo = cuts[i];
                const double hi = i + 1 < cuts.size() ? cuts[i + 1] : a.cap;
                if (!(hi > lo)) continue;
                double err = 0.0, l1 = 0.0;
                if (std::isinf(hi)) {
                    // t = lo exp(s) turns power-law tails into exponentially decaying integrands.
                    const auto stretched = [&](double s) {
                        const double t = lo * std::exp(s);
                        return std::isfinite(t) ? f(t) * t : 0.0;
                    };
                    acc += es.integrate(stretched, 0.0, detail::kInf, opt.tolerance, &err, &l1);
                } else {
                    acc += ts.integrate(f, lo, hi, opt.tolerance, &err, &l1);
                }
                err_total += err;
            }
        }
    }
    for (const auto& at : parts.atoms) {
        const double z = at.location[0];
        acc += at.mass * (phi(x + z) - p0 - (std::abs(z) < 1.0 ? z * p1 : 0.0));
    }
    const double budget = 1e3 * opt.tolerance * std::max(1.0, std::abs(acc));
    if (!(err_total <= budget)) {
        std::ostringstream msg;
        msg << "apply_levy: quadrature error estimate " << err_total << " exceeds " << budget;
        throw QuadratureError(msg.str(), err_total);
    }
    return acc;
}

} // namespace tcmfg
