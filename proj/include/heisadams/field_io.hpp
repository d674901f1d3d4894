#pragma once

#include <iosfwd>
#include <string>

#include "heisadams/grid.hpp"

namespace heisadams {

/// Flat little-endian layout: dims (3 x uint64), half extents (3 x f64),
/// spacing (3 x f64), then the physical node values as f64, x fastest.
void write_field_binary(std::ostream& out, const GridField& u);

struct FieldHeader {
  std::array<std::uint64_t, 3> dims{};
  std::array<double, 3> half_extent{};
  std::array<double, 3> spacing{};
};

/// Reads a binary field onto `domain`, which must match the header geometry.
/// Throws std::runtime_error on truncated input or mismatch.
GridField read_field_binary(std::istream& in, DomainPtr domain);
FieldHeader read_field_header(std::istream& in);

/// CSV with columns i,j,k,x,y,t,value over physical nodes.
void write_field_csv(std::ostream& out, const GridField& u);

}  // namespace heisadams
