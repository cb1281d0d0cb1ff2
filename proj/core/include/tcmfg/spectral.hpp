#pragma once

#include "tcmfg/grid.hpp"
#include "tcmfg/levy.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace tcmfg {

class DiscreteLevyOp;

using Complex = std::complex<double>;

/// In-place complex DFT over the grid (unnormalized forward, normalized inverse).
void fft_forward(const GridSpec& grid, std::vector<Complex>& data);
void fft_inverse(const GridSpec& grid, std::vector<Complex>& data);

/// Angular wave vector of the flat Fourier index k on the torus.
Vec2 wave_vector(const GridSpec& grid, std::size_t flat);

/// Fourier symbol psi(k) with L e^{ik.x} = psi(k) e^{ik.x}. Throws SymbolError if not finite.
Complex levy_symbol(const LevyTriplet& t, Vec2 k);

using SymbolFn = std::function<Complex(Vec2)>;

SymbolFn symbol_of(const LevyTriplet& t);
SymbolFn symbol_of(const DiscreteLevyOp& op);

/// exp(t psi) applied mode by mode. With `adjoint` the conjugate symbol (operator L*) is used.
GridFunction spectral_reference(const SymbolFn& symbol, const GridFunction& phi, double t, bool adjoint = false);
GridFunction spectral_reference(const LevyTriplet& triplet, const GridFunction& phi, double t, bool adjoint = false);

/// Circular convolution (a * b)(x) = sum_y a(y) b(x - y) over grid nodes.
std::vector<double> circular_convolution(const GridSpec& grid, std::span<const double> a, std::span<const double> b);

} // namespace tcmfg
