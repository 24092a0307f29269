#include "modspec/container.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace modspec {
namespace {

constexpr char kMagic[4] = {'M', 'S', 'P', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

template <class T>
void put(std::ostream& os, T v) {
  v = to_little(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, const char* what) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw FormatError(std::string("field container: truncated ") + what);
  return to_little(v);
}

}  // namespace

void write_field(std::ostream& os, const SpatialField& f) {
  const GridSpec& g = f.grid();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim));
  for (int a = 0; a < g.dim; ++a) put<std::uint32_t>(os, static_cast<std::uint32_t>(g.points[a]));
  for (int a = 0; a < g.dim; ++a) put<double>(os, g.length[a]);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(f.representation()));
  for (const auto& v : f.values()) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw FormatError("field container: write failed");
}

SpatialField read_field(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("field container: bad magic");
  if (get<std::uint32_t>(is, "version") != kVersion)
    throw FormatError("field container: unsupported version");
  GridSpec g;
  const auto dim = get<std::uint32_t>(is, "dim");
  if (dim < 1 || dim > kMaxDim) throw FormatError("field container: dim out of range");
  g.dim = static_cast<int>(dim);
  for (int a = 0; a < g.dim; ++a) {
    const auto n = get<std::uint32_t>(is, "points");
    if (n == 0 || n > (1u << 20)) throw FormatError("field container: points out of range");
    g.points[a] = static_cast<int>(n);
  }
  for (int a = 0; a < g.dim; ++a) g.length[a] = get<double>(is, "length");
  const auto rep = get<std::uint8_t>(is, "representation");
  if (rep > 1) throw FormatError("field container: bad representation flag");
  try {
    g.validate();
  } catch (const GridError& e) {
    throw FormatError(std::string("field container: ") + e.what());
  }
  SpatialField f(g, static_cast<Representation>(rep));
  for (auto& v : f.values()) {
    const double re = get<double>(is, "data");
    const double im = get<double>(is, "data");
    v = {re, im};
  }
  if (is.peek() != std::char_traits<char>::eof()) throw FormatError("field container: trailing bytes");
  return f;
}

void save_field(const std::string& path, const SpatialField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("field container: cannot open " + path);
  write_field(os, f);
}

SpatialField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("field container: cannot open " + path);
  return read_field(is);
}

}  // namespace modspec
