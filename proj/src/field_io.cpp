#include "heisadams/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace heisadams {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put(std::ostream& out, T v) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.write(buf, 8);
}

template <class T>
T get(std::istream& in) {
  char buf[8];
  if (!in.read(buf, 8)) throw std::runtime_error("read_field_binary: truncated input");
  std::uint64_t bits;
  std::memcpy(&bits, buf, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  T v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_field_binary(std::ostream& out, const GridField& u) {
  const auto& d = u.domain();
  for (auto n : d.dims()) put<std::uint64_t>(out, n);
  for (auto l : d.half_extent()) put<double>(out, l);
  for (auto h : d.spacing()) put<double>(out, h);
  for (std::size_t o : d.physical_nodes()) put<double>(out, u[o]);
}

FieldHeader read_field_header(std::istream& in) {
  FieldHeader h;
  for (auto& n : h.dims) n = get<std::uint64_t>(in);
  for (auto& l : h.half_extent) l = get<double>(in);
  for (auto& s : h.spacing) s = get<double>(in);
  return h;
}

GridField read_field_binary(std::istream& in, DomainPtr domain) {
  const FieldHeader h = read_field_header(in);
  const auto& d = *domain;
  for (int a = 0; a < 3; ++a) {
    if (h.dims[a] != d.dims()[a] || h.half_extent[a] != d.half_extent()[a] ||
        h.spacing[a] != d.spacing()[a])
      throw std::runtime_error("read_field_binary: header does not match the target domain");
  }
  GridField u(std::move(domain));
  for (std::size_t o : u.domain().physical_nodes()) u[o] = get<double>(in);
  return u;
}

void write_field_csv(std::ostream& out, const GridField& u) {
  const auto& d = u.domain();
  const auto n = d.dims();
  out << "i,j,k,x,y,t,value\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t j = 0; j < n[1]; ++j)
      for (std::size_t i = 0; i < n[0]; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i), jj = static_cast<std::ptrdiff_t>(j),
                   kk = static_cast<std::ptrdiff_t>(k);
        const GaugePoint c = d.coordinate(ii, jj, kk);
        out << i << ',' << j << ',' << k << ',' << c.x << ',' << c.y << ',' << c.t << ','
            << u.at(ii, jj, kk) << '\n';
      }
}

}  // namespace heisadams
