#ifndef MIXBESOV_FIELD_IO_HPP
#define MIXBESOV_FIELD_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "mixbesov/grid.hpp"

// MBDF layout (little endian):
//   "MBDF" | u32 version=1 | u32 n1 | u32 n2 | f64 L | u8 dtype | payload
// dtype 0: n1*n2 f64 real values, dtype 1: n1*n2 interleaved (re, im) f64 pairs.
// Payload is row-major with x1 as the major axis.

namespace mixbesov {

inline constexpr std::array<char, 4> kFieldMagic{'M', 'B', 'D', 'F'};
inline constexpr std::uint32_t kFieldFormatVersion = 1;

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "MBDF I/O assumes a little-endian host");

template <class T>
void put(std::vector<unsigned char>& out, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.insert(out.end(), buf, buf + sizeof(T));
}

template <class T>
T take(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size())
    throw Error(ErrorCode::TruncatedPayload, "file ends inside a field");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace detail

inline std::vector<unsigned char> encode_field(const Field& field) {
  std::vector<unsigned char> out;
  const auto& g = field.grid();
  const bool real = field.is_real();
  out.reserve(25 + g.size() * (real ? 8 : 16));
  out.insert(out.end(), kFieldMagic.begin(), kFieldMagic.end());
  detail::put<std::uint32_t>(out, kFieldFormatVersion);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n1()));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n2()));
  detail::put<double>(out, g.window_half_width());
  detail::put<std::uint8_t>(out, real ? 0 : 1);
  for (const auto& v : field.values()) {
    detail::put<double>(out, v.real());
    if (!real) detail::put<double>(out, v.imag());
  }
  return out;
}

inline Field decode_field(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || !std::equal(kFieldMagic.begin(), kFieldMagic.end(), bytes.begin()))
    throw Error(ErrorCode::BadMagic, "missing MBDF magic");
  std::size_t pos = 4;
  const auto version = detail::take<std::uint32_t>(bytes, pos);
  if (version != kFieldFormatVersion)
    throw Error(ErrorCode::UnsupportedVersion, "MBDF version " + std::to_string(version));
  const auto n1 = detail::take<std::uint32_t>(bytes, pos);
  const auto n2 = detail::take<std::uint32_t>(bytes, pos);
  const auto L = detail::take<double>(bytes, pos);
  const auto dtype = detail::take<std::uint8_t>(bytes, pos);
  if (dtype > 1) throw Error(ErrorCode::UnsupportedVersion, "unknown dtype");
  const GridSpec grid = make_grid(n1, n2, L);
  const std::size_t width = dtype == 0 ? 8 : 16;
  if (bytes.size() - pos < grid.size() * width)
    throw Error(ErrorCode::TruncatedPayload,
                "header promises " + std::to_string(n1) + "x" + std::to_string(n2) +
                    " values but the payload is short");
  std::vector<Complex> values(grid.size());
  for (auto& v : values) {
    const double re = detail::take<double>(bytes, pos);
    const double im = dtype == 0 ? 0.0 : detail::take<double>(bytes, pos);
    v = Complex(re, im);
  }
  return Field(grid, std::move(values), dtype == 0 ? FieldKind::Real : FieldKind::Complex);
}

inline void write_field(const Field& field, const std::filesystem::path& path) {
  const auto bytes = encode_field(field);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

inline Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

}  // namespace mixbesov

#endif  // MIXBESOV_FIELD_IO_HPP
