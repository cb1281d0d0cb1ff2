#include "tcmfg/grid_io.hpp"

#include "tcmfg/error.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

namespace tcmfg {
namespace {

template <class U>
void put_le(std::ostream& os, U v) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(const unsigned char* p) {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double v) { put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(v)); }

void write_rows(std::ostream& os, const GridSpec& grid, std::span<const double> v) {
    os << (grid.dim == 1 ? "index,x,value\n" : "index,x,y,value\n");
    for (std::size_t k = 0; k < v.size(); ++k) {
        auto p = grid.position(k);
        os << k << ',' << format_double(p[0]);
        if (grid.dim == 2) os << ',' << format_double(p[1]);
        os << ',' << format_double(v[k]) << '\n';
    }
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const GridFunction& f) { write_rows(os, f.grid(), f.values()); }
void write_csv(std::ostream& os, const ProbabilityVector& m) { write_rows(os, m.grid(), m.masses()); }

void write_binary(std::ostream& os, const GridSpec& grid, std::span<const std::span<const double>> slices) {
    os.write("TCMFG1", 6);
    put_le<std::uint16_t>(os, static_cast<std::uint16_t>(grid.dim));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(grid.points));
    put_f64(os, grid.half_width);
    put_f64(os, grid.horizon);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(grid.steps));
    for (auto s : slices) {
        if (s.size() != grid.size()) throw InvalidArgument("slice size does not match grid");
        for (double v : s) put_f64(os, v);
    }
}

void write_binary(std::ostream& os, const GridFunction& f) {
    std::array<std::span<const double>, 1> s{f.values()};
    write_binary(os, f.grid(), s);
}

void write_binary(std::ostream& os, const std::vector<GridFunction>& trajectory) {
    if (trajectory.empty()) throw InvalidArgument("empty trajectory");
    std::vector<std::span<const double>> s;
    for (const auto& f : trajectory) s.push_back(f.values());
    write_binary(os, trajectory.front().grid(), s);
}

void write_binary(std::ostream& os, const std::vector<ProbabilityVector>& trajectory) {
    if (trajectory.empty()) throw InvalidArgument("empty trajectory");
    std::vector<std::span<const double>> s;
    for (const auto& m : trajectory) s.push_back(m.masses());
    write_binary(os, trajectory.front().grid(), s);
}

BinaryBlock read_binary(std::istream& is) {
    std::array<unsigned char, kBinaryHeaderSize> h{};
    if (!is.read(reinterpret_cast<char*>(h.data()), h.size())) throw InvalidArgument("truncated binary header");
    if (std::memcmp(h.data(), "TCMFG1", 6) != 0) throw InvalidArgument("bad binary magic");
    BinaryBlock b;
    b.grid.dim = get_le<std::uint16_t>(h.data() + 6);
    b.grid.points = get_le<std::uint32_t>(h.data() + 8);
    b.grid.half_width = std::bit_cast<double>(get_le<std::uint64_t>(h.data() + 12));
    b.grid.horizon = std::bit_cast<double>(get_le<std::uint64_t>(h.data() + 20));
    b.grid.steps = get_le<std::uint32_t>(h.data() + 28);
    if (b.grid.dim != 1 && b.grid.dim != 2) throw InvalidArgument("bad dimension in binary header");
    const std::size_t n = b.grid.size();
    std::vector<unsigned char> buf(n * 8);
    while (true) {
        is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        auto got = static_cast<std::size_t>(is.gcount());
        if (got == 0) break;
        if (got != buf.size()) throw InvalidArgument("truncated binary slice");
        std::vector<double> s(n);
        for (std::size_t k = 0; k < n; ++k) s[k] = std::bit_cast<double>(get_le<std::uint64_t>(buf.data() + 8 * k));
        b.slices.push_back(std::move(s));
    }
    return b;
}

} // namespace tcmfg
