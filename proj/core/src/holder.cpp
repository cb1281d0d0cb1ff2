#include "tcmfg/holder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tcmfg/error.hpp"
#include "tcmfg/parallel.hpp"

namespace tcmfg {

double holder_seminorm(const GridFunction& phi, double alpha, const HolderOptions& options) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Holder exponent must lie in (0, 1]");
    const GridSpec& grid = phi.grid();
    const double h = grid.spacing();
    int reach = static_cast<int>(std::floor(options.window / h + 1e-9));
    reach = std::min(reach, static_cast<int>(grid.points / 2));
    if (options.max_lag > 0) reach = std::min(reach, static_cast<int>(options.max_lag));

    // Half of the lag set suffices since the quotient is symmetric in (x, y).
    struct Lag {
        Offset offset;
        double scale;
    };
    std::vector<Lag> lags;
    const int ylo = grid.dim == 2 ? -reach : 0;
    const int yhi = grid.dim == 2 ? reach : 0;
    for (int dx = 0; dx <= reach; ++dx) {
        for (int dy = ylo; dy <= yhi; ++dy) {
            if (dx == 0 && dy <= 0) continue;
            const double dist = h * std::hypot(static_cast<double>(dx), static_cast<double>(dy));
            if (dist > options.window * (1.0 + 1e-12)) continue;
            lags.push_back({Offset{dx, dy}, 1.0 / std::pow(dist, alpha)});
        }
    }

    const std::size_t n = phi.size();
    const std::size_t workers = std::max<std::size_t>(1, worker_count());
    std::vector<double> partial(workers, 0.0);
    const std::size_t chunk = (n + workers - 1) / workers;
    parallel_for(workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            double best = 0.0;
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t k = lo; k < hi; ++k) {
                for (const Lag& lag : lags) {
                    const double diff = std::abs(phi[shift_index(k, lag.offset, grid)] - phi[k]);
                    best = std::max(best, diff * lag.scale);
                }
            }
            partial[w] = best;
        }
    });
    return *std::max_element(partial.begin(), partial.end());
}

double holder_norm(const GridFunction& phi, double alpha, const HolderOptions& options) {
    return phi.sup_norm() + holder_seminorm(phi, alpha, options);
}

} // namespace tcmfg
