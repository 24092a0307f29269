#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "modspec/field.hpp"

namespace modspec {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat binary container:
//   "MSPF" | u32 version=1 | u32 dim | u32 N[dim] | f64 L[dim] | u8 representation
//   then N1*...*Nd complex samples, row-major, interleaved (re, im) little-endian f64.
void write_field(std::ostream& os, const SpatialField& f);
SpatialField read_field(std::istream& is);
void save_field(const std::string& path, const SpatialField& f);
SpatialField load_field(const std::string& path);

}  // namespace modspec
