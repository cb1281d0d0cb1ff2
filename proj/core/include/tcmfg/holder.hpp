#pragma once

#include <cstddef>

#include "tcmfg/grid.hpp"

namespace tcmfg {

struct HolderOptions {
    double window = 1.0;        // pairs with |x - y| <= window (minimal image on the torus)
    std::size_t max_lag = 0;    // cap on the lag in cells per axis, 0 for no cap
};

/// Largest |phi(x) - phi(y)| / |x - y|^alpha over node pairs inside the window.
double holder_seminorm(const GridFunction& phi, double alpha, const HolderOptions& options = {});

/// Sup norm plus seminorm.
double holder_norm(const GridFunction& phi, double alpha, const HolderOptions& options = {});

} // namespace tcmfg
