#pragma once

#include "tcmfg/grid.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace tcmfg {

/// CSV rows `index,x[,y],value` with a header line.
void write_csv(std::ostream& os, const GridFunction& f);
void write_csv(std::ostream& os, const ProbabilityVector& m);

/// Flat binary block: 32-byte little-endian header followed by float64 slices, row-major.
///
/// Header layout:
///   bytes  0..5   magic "TCMFG1"
///   bytes  6..7   uint16 dimension d
///   bytes  8..11  uint32 points per axis N
///   bytes 12..19  float64 half-width R
///   bytes 20..27  float64 horizon T
///   bytes 28..31  uint32 time steps M
/// A trajectory stores M+1 slices; a single field stores one.
inline constexpr std::size_t kBinaryHeaderSize = 32;

void write_binary(std::ostream& os, const GridSpec& grid, std::span<const std::span<const double>> slices);
void write_binary(std::ostream& os, const GridFunction& f);
void write_binary(std::ostream& os, const std::vector<GridFunction>& trajectory);
void write_binary(std::ostream& os, const std::vector<ProbabilityVector>& trajectory);

struct BinaryBlock {
    GridSpec grid;
    std::vector<std::vector<double>> slices;
};

/// Throws InvalidArgument on a bad magic, truncated data or inconsistent sizes.
BinaryBlock read_binary(std::istream& is);

/// Shortest round-trip decimal for a double ("%.17g").
std::string format_double(double v);

} // namespace tcmfg
