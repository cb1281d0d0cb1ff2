#include "tcmfg/stencil.hpp"

#include "tcmfg/detail/measure_parts.hpp"
#include "tcmfg/error.hpp"
#include "tcmfg/grid_io.hpp"
#include "tcmfg/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace tcmfg {
namespace {

double offset_norm(Offset o) { return std::hypot(static_cast<double>(o.dx), static_cast<double>(o.dy)); }

struct Shift {
    std::size_t sx;
    std::size_t sy;
    double w;
};

std::vector<Shift> shifts(const std::vector<StencilEntry>& entries, const GridSpec& g, int sign) {
    const auto n = static_cast<long long>(g.points);
    std::vector<Shift> s;
    s.reserve(entries.size());
    for (const auto& e : entries) {
        auto mod = [n](long long v) { return static_cast<std::size_t>(((v % n) + n) % n); };
        s.push_back({mod(sign * static_cast<long long>(e.offset.dx)), mod(sign * static_cast<long long>(e.offset.dy)), e.weight});
    }
    return s;
}

enum class Mode { difference, gather };

void sweep(const std::vector<Shift>& sh, const GridSpec& g, std::span<const double> in, std::span<double> out, Mode mode) {
    if (in.size() != g.size() || out.size() != g.size()) throw InvalidArgument("stencil apply: size mismatch");
    if (in.data() == out.data()) throw InvalidArgument("stencil apply: input and output alias");
    const std::size_t n = g.points;
    const std::size_t mask = n - 1;
    const int bits = std::countr_zero(n);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) out[k] = 0.0;
        for (const auto& s : sh) {
            if (g.dim == 1) {
                if (mode == Mode::difference)
                    for (std::size_t k = b; k < e; ++k) out[k] += s.w * (in[(k + s.sx) & mask] - in[k]);
                else
                    for (std::size_t k = b; k < e; ++k) out[k] += s.w * in[(k + s.sx) & mask];
            } else {
                for (std::size_t k = b; k < e; ++k) {
                    const std::size_t i = k >> bits;
                    const std::size_t j = k & mask;
                    const std::size_t src = (((i + s.sx) & mask) << bits) | ((j + s.sy) & mask);
                    out[k] += mode == Mode::difference ? s.w * (in[src] - in[k]) : s.w * in[src];
                }
            }
        }
    });
}

} // namespace

DiscreteLevyOp::DiscreteLevyOp(const GridSpec& grid, double epsilon, std::vector<StencilEntry> entries)
    : grid_(grid), epsilon_(epsilon) {
    grid_.validate();
    std::map<Offset, double> merged;
    for (const auto& e : entries) {
        if (!std::isfinite(e.weight) || e.weight < 0.0) throw InvalidArgument("stencil weights must be finite and nonnegative");
        if (grid_.dim == 1 && e.offset.dy != 0) throw InvalidArgument("1D stencil with a second-axis offset");
        const Offset o = wrap(e.offset, grid_);
        if (o.dx == 0 && o.dy == 0) continue;
        merged[o] += e.weight;
    }
    for (const auto& [o, w] : merged) {
        if (w == 0.0) continue;
        entries_.push_back({o, w});
        total_mass_ += w;
    }
}

void DiscreteLevyOp::apply(std::span<const double> in, std::span<double> out) const {
    sweep(shifts(entries_, grid_, +1), grid_, in, out, Mode::difference);
}

GridFunction DiscreteLevyOp::apply(const GridFunction& phi) const {
    if (!(phi.grid() == grid_)) throw InvalidArgument("stencil apply: grid mismatch");
    GridFunction out(grid_);
    apply(phi.values(), out.values());
    return out;
}

void DiscreteLevyOp::apply_adjoint(std::span<const double> in, std::span<double> out) const {
    sweep(shifts(entries_, grid_, -1), grid_, in, out, Mode::difference);
}

void DiscreteLevyOp::gather(std::span<const double> in, std::span<double> out) const {
    sweep(shifts(entries_, grid_, +1), grid_, in, out, Mode::gather);
}

double DiscreteLevyOp::lk() const {
    const double h = grid_.spacing();
    Vec2 first{};
    double second = 0.0;
    double tail = 0.0;
    for (const auto& e : entries_) {
        const double r = offset_norm(e.offset) * h;
        if (r < 1.0) {
            first[0] += e.weight * e.offset.dx * h;
            first[1] += e.weight * e.offset.dy * h;
            second += e.weight * r * r;
        } else {
            tail += e.weight;
        }
    }
    return std::hypot(first[0], first[1]) + 0.5 * second + 2.0 * tail;
}

double DiscreteLevyOp::min_offset_norm() const {
    double m = detail::kInf;
    for (const auto& e : entries_) m = std::min(m, offset_norm(e.offset) * grid_.spacing());
    return m;
}

std::complex<double> DiscreteLevyOp::symbol(Vec2 k) const {
    const double h = grid_.spacing();
    std::complex<double> s{};
    for (const auto& e : entries_) {
        const double ph = h * (k[0] * e.offset.dx + k[1] * e.offset.dy);
        s += e.weight * std::complex<double>(std::cos(ph) - 1.0, std::sin(ph));
    }
    return s;
}

void DiscreteLevyOp::write_csv(std::ostream& os) const {
    os << (grid_.dim == 1 ? "dx,weight\n" : "dx,dy,weight\n");
    for (const auto& e : entries_) {
        os << e.offset.dx << ',';
        if (grid_.dim == 2) os << e.offset.dy << ',';
        os << format_double(e.weight) << '\n';
    }
}

DiscreteLevyOp adjoint(const DiscreteLevyOp& op) {
    std::vector<StencilEntry> t;
    t.reserve(op.entries().size());
    for (const auto& e : op.entries()) t.push_back({Offset{-e.offset.dx, -e.offset.dy}, e.weight});
    DiscreteLevyOp a(op.grid(), op.epsilon(), std::move(t));
    a.set_snapping_error(op.snapping_error());
    a.set_cl_constant(op.cl_constant());
    return a;
}

double default_far_periods(int dim) { return dim == 1 ? 64.0 : 2.0; }

namespace {

class Builder {
public:
    Builder(const GridSpec& g, double eps) : g_(g), eps_(eps), h_(g.spacing()) {
        const std::size_t cells = g.dim == 1 ? g.points : g.points * g.points;
        acc_.assign(cells, 0.0);
        shell_ = static_cast<int>(std::ceil(eps / h_ - 1e-9));
        if (shell_ < 1) shell_ = 1;
        if (shell_ >= static_cast<int>(g.points / 2))
            throw InvalidArgument("epsilon shell does not fit inside the torus");
        near_ = static_cast<int>(std::ceil(1.0 / h_ - 1e-9)) - 1;
    }

    int shell() const { return shell_; }
    int near_cells() const { return near_; }
    double spacing() const { return h_; }

    /// Grid node nearest to the ray through `dir` at distance >= eps.
    Offset snap_outward(Vec2 dir, double dist) {
        const double len = std::hypot(dir[0], dir[1]);
        const Vec2 u{dir[0] / len, dir[1] / len};
        if (g_.dim == 1) {
            const int k = std::max(shell_, static_cast<int>(std::ceil(dist / h_ - 1e-9)));
            return {u[0] > 0 ? k : -k, 0};
        }
        double t = std::max(dist, eps_) / h_;
        for (int it = 0; it < 1024; ++it, t += 0.25) {
            Offset o{static_cast<int>(std::lround(t * u[0])), static_cast<int>(std::lround(t * u[1]))};
            if (offset_norm(o) * h_ >= eps_ * (1.0 - 1e-12)) return o;
        }
        throw InvalidArgument("could not snap an atom to the grid");
    }

    Offset snap_atom(Vec2 z, double& error) {
        Offset o{static_cast<int>(std::lround(z[0] / h_)), static_cast<int>(std::lround(z[1] / h_))};
        if (offset_norm(o) * h_ < eps_ * (1.0 - 1e-12)) o = snap_outward(z, std::hypot(z[0], z[1]));
        error = std::max(error, std::hypot(o.dx * h_ - z[0], o.dy * h_ - z[1]));
        return o;
    }

    void deposit(Offset node, double w) {
        if (!(w > 0.0)) return;
        Offset o = wrap(node, g_);
        if (o.dx == 0 && o.dy == 0) return;
        if (offset_norm(o) * h_ < eps_ * (1.0 - 1e-12)) o = wrap(snap_outward({double(o.dx), double(o.dy)}, eps_), g_);
        acc_[index(o)] += w;
    }

    void spread_uniform(double mass) {
        if (!(mass > 0.0)) return;
        const double each = mass / static_cast<double>(acc_.size());
        for (std::size_t k = 0; k < acc_.size(); ++k) deposit(offset_of(k), each);
    }

    std::vector<StencilEntry> entries() const {
        std::vector<StencilEntry> out;
        for (std::size_t k = 0; k < acc_.size(); ++k)
            if (acc_[k] > 0.0) out.push_back({offset_of(k), acc_[k]});
        return out;
    }

private:
    std::size_t index(Offset o) const {
        const auto n = static_cast<long long>(g_.points);
        auto mod = [n](long long v) { return static_cast<std::size_t>(((v % n) + n) % n); };
        return g_.dim == 1 ? mod(o.dx) : mod(o.dx) * g_.points + mod(o.dy);
    }
    Offset offset_of(std::size_t k) const {
        if (g_.dim == 1) return wrap({static_cast<int>(k), 0}, g_);
        return wrap({static_cast<int>(k / g_.points), static_cast<int>(k % g_.points)}, g_);
    }

    GridSpec g_;
    double eps_;
    double h_;
    int shell_ = 1;
    int near_ = 0;
    std::vector<double> acc_;
};

double axis_cell_mass(const detail::AxisPart& a, double lo, double hi, int side, int n) {
    if (a.form == detail::AxisPart::Form::stable) return a.moment(0.0, lo, hi, side);
    const auto& r = detail::gauss_legendre(n);
    const double c = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double m = 0.0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q) m += r.weights[q] * a.density(side * (c + half * r.nodes[q]));
    return m * half;
}

} // namespace

DiscreteLevyOp build_epsilon_approx(const LevyTriplet& triplet, double eps, const GridSpec& grid, const EpsilonOptions& options) {
    triplet.validate();
    grid.validate();
    if (triplet.dim != grid.dim) throw InvalidArgument("triplet and grid dimensions differ");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    const double h = grid.spacing();
    if (eps < h * (1.0 - 1e-12)) {
        const double need = std::exp2(std::ceil(std::log2(2.0 * grid.half_width / eps)));
        std::ostringstream msg;
        msg << "epsilon " << eps << " is below the grid spacing " << h << "; need at least " << need
            << " points per axis on this domain";
        throw ResolutionError(msg.str());
    }
    const int dim = grid.dim;
    Builder b(grid, eps);
    const int shell = b.shell();
    const int near = b.near_cells();
    const double rc = (near + 0.5) * h;
    const double periods = options.far_periods > 0.0 ? options.far_periods : default_far_periods(dim);
    const int kmax = static_cast<int>(std::ceil(periods * grid.period() / h));
    const double rout = (kmax + 0.5) * h;
    const bool reflected = options.compensator == Compensator::reflected;
    double snap_err = 0.0;

    const double cnorm = std::hypot(triplet.drift[0], triplet.drift[1]);
    if (cnorm > 0.0) {
        const Vec2 u{triplet.drift[0] / cnorm, triplet.drift[1] / cnorm};
        const Offset o = b.snap_outward(u, eps);
        const double r = offset_norm(o) * h;
        snap_err = std::max(snap_err, std::hypot(o.dx * h - eps * u[0], o.dy * h - eps * u[1]));
        b.deposit(o, cnorm / r);
    }
    for (int i = 0; i < dim; ++i) {
        const Vec2 a = triplet.diffusion[static_cast<std::size_t>(i)];
        const double an = std::hypot(a[0], a[1]);
        if (an == 0.0) continue;
        const Vec2 u{a[0] / an, a[1] / an};
        const Offset o = b.snap_outward(u, eps);
        const double r = offset_norm(o) * h;
        snap_err = std::max(snap_err, std::hypot(o.dx * h - eps * u[0], o.dy * h - eps * u[1]));
        b.deposit(o, an * an / (r * r));
        b.deposit({-o.dx, -o.dy}, an * an / (r * r));
    }

    Vec2 s_target{}, s_bins{}, f_target{}, f_bins{};
    double far = 0.0;

    auto record = [&](Offset node, double w) {
        const bool in_box = std::max(std::abs(node.dx), std::abs(node.dy)) <= near;
        if (in_box) {
            s_bins[0] += w * node.dx * h * node.dx * h;
            s_bins[1] += w * node.dy * h * node.dy * h;
            f_bins[0] += w * node.dx * h;
            f_bins[1] += w * node.dy * h;
        }
        const double r = offset_norm(node) * h;
        if (reflected && r < 1.0) {
            const Offset q = b.snap_outward({-double(node.dx), -double(node.dy)}, eps);
            b.deposit(q, w * r / (offset_norm(q) * h));
        }
        b.deposit(node, w);
    };

    const auto parts = detail::decompose(triplet.jump, dim);
    for (const auto& a : parts.axes) {
        const auto ax = static_cast<std::size_t>(a.axis);
        for (int side : {+1, -1}) {
            for (int k = 0; k <= kmax; ++k) {
                const double lo = std::max((k - 0.5) * h, eps);
                const double hi = std::min((k + 0.5) * h, a.cap);
                if (!(hi > lo)) continue;
                const double w = axis_cell_mass(a, lo, hi, side, options.gauss_points);
                const int node = k * h >= eps * (1.0 - 1e-12) ? k : shell;
                Offset o{};
                (ax == 0 ? o.dx : o.dy) = side * node;
                record(o, w);
            }
            far += a.moment(0.0, rout, detail::kInf, side);
            s_target[ax] += a.moment(2.0, 0.0, rc, side);
            f_target[ax] += side * (rc > 1.0 ? a.moment(1.0, 1.0, rc, side) : -a.moment(1.0, rc, 1.0, side));
        }
    }

    for (const auto& p : parts.radial) {
        const auto& rule = detail::gauss_legendre(options.gauss_points >= 4 ? 4 : 2);
        const auto& sub = detail::gauss_legendre(2);
        for (int i = -kmax; i <= kmax; ++i) {
            for (int j = -kmax; j <= kmax; ++j) {
                const double x0 = (i - 0.5) * h, x1 = (i + 0.5) * h;
                const double y0 = (j - 0.5) * h, y1 = (j + 0.5) * h;
                const double dxmin = (x0 <= 0 && x1 >= 0) ? 0.0 : std::min(std::abs(x0), std::abs(x1));
                const double dymin = (y0 <= 0 && y1 >= 0) ? 0.0 : std::min(std::abs(y0), std::abs(y1));
                const double dmin = std::hypot(dxmin, dymin);
                const double dmax = std::hypot(std::max(std::abs(x0), std::abs(x1)), std::max(std::abs(y0), std::abs(y1)));
                if (dmax <= eps || dmin >= rout) continue;
                double w = 0.0;
                auto integrate = [&](double ax0, double ay0, double len, const detail::GaussRule& r, bool clip) {
                    double m = 0.0;
                    for (std::size_t qa = 0; qa < r.nodes.size(); ++qa)
                        for (std::size_t qb = 0; qb < r.nodes.size(); ++qb) {
                            const double zx = ax0 + 0.5 * len * (r.nodes[qa] + 1.0);
                            const double zy = ay0 + 0.5 * len * (r.nodes[qb] + 1.0);
                            const double rr = std::hypot(zx, zy);
                            if (clip && (rr < eps || rr >= rout)) continue;
                            m += r.weights[qa] * r.weights[qb] * p.density(rr);
                        }
                    return m * 0.25 * len * len;
                };
                if (dmin >= eps && dmax < rout) {
                    w = integrate(x0, y0, h, rule, false);
                } else {
                    const int split = 8;
                    const double sh = h / split;
                    for (int a = 0; a < split; ++a)
                        for (int c = 0; c < split; ++c) w += integrate(x0 + a * sh, y0 + c * sh, sh, sub, true);
                }
                Offset node{i, j};
                if (offset_norm(node) * h < eps * (1.0 - 1e-12)) node = b.snap_outward({double(i), double(j)}, eps);
                record(node, w);
            }
        }
        far += p.moment(0.0, rout, detail::kInf);
        const double s = p.box_axis_second_moment(rc);
        s_target[0] += s;
        s_target[1] += s;
    }

    for (const auto& at : parts.atoms) {
        const double r = std::hypot(at.location[0], at.location[1]);
        if (std::max(std::abs(at.location[0]), std::abs(at.location[1])) < rc) {
            s_target[0] += at.mass * at.location[0] * at.location[0];
            s_target[1] += at.mass * at.location[1] * at.location[1];
        }
        if (r < eps) continue;
        const bool in_box = std::max(std::abs(at.location[0]), std::abs(at.location[1])) < rc;
        const double sign = (in_box ? 1.0 : 0.0) - (r < 1.0 ? 1.0 : 0.0);
        f_target[0] += sign * at.mass * at.location[0];
        f_target[1] += sign * at.mass * at.location[1];
        record(b.snap_atom(at.location, snap_err), at.mass);
    }

    if (!reflected) {
        const double e = shell * h;
        for (int ax = 0; ax < dim; ++ax) {
            const auto i = static_cast<std::size_t>(ax);
            const double s = std::max(0.0, s_target[i] - s_bins[i]);
            const double m = f_target[i] - f_bins[i];
            if (s == 0.0 && m == 0.0) continue;
            const double tot = std::max(s / (e * e), std::abs(m) / e);
            const double plus = 0.5 * (tot + m / e);
            const double minus = 0.5 * (tot - m / e);
            Offset op{}, om{};
            (ax == 0 ? op.dx : op.dy) = shell;
            (ax == 0 ? om.dx : om.dy) = -shell;
            b.deposit(op, plus);
            b.deposit(om, std::max(0.0, minus));
        }
    }

    b.spread_uniform(far);

    DiscreteLevyOp op(grid, eps, b.entries());
    op.set_snapping_error(snap_err);
    double a2 = 0.0;
    for (const auto& col : triplet.diffusion)
        for (double v : col) a2 += v * v;
    op.set_cl_constant(4.0 * (cnorm + a2 + levy_integral(triplet.jump, dim)));
    return op;
}

} // namespace tcmfg
