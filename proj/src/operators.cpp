#include "heisadams/operators.hpp"

#include <cmath>

#include "heisadams/summation.hpp"

namespace heisadams {

namespace {

// Applies the sublaplacian stencil to `in` on nodes lo..hi (inclusive) per
// axis, writing to `out`. Every pairwise coefficient depends only on the
// coordinates shared by the two nodes, so the stencil matrix is symmetric.
void stencil(const GridDomain& d, std::span<const double> in, std::span<double> out,
             std::ptrdiff_t lo_shift, std::ptrdiff_t hi_shift) {
  const auto n = d.dims();
  const auto h = d.spacing();
  const auto s = d.stride();
  const double ixx = 1.0 / (h[0] * h[0]);
  const double iyy = 1.0 / (h[1] * h[1]);
  const double itt = 1.0 / (h[2] * h[2]);
  const double ixt = 1.0 / (4.0 * h[0] * h[2]);
  const double iyt = 1.0 / (4.0 * h[1] * h[2]);
  for (std::ptrdiff_t k = lo_shift; k < static_cast<std::ptrdiff_t>(n[2]) + hi_shift; ++k)
    for (std::ptrdiff_t j = lo_shift; j < static_cast<std::ptrdiff_t>(n[1]) + hi_shift; ++j) {
      for (std::ptrdiff_t i = lo_shift; i < static_cast<std::ptrdiff_t>(n[0]) + hi_shift; ++i) {
        const GaugePoint c = d.coordinate(i, j, k);
        const std::size_t o = d.offset(i, j, k);
        const double* u = in.data() + o;
        const double uc = u[0];
        const double uxx = (u[s[0]] - 2.0 * uc + u[-s[0]]) * ixx;
        const double uyy = (u[s[1]] - 2.0 * uc + u[-s[1]]) * iyy;
        const double utt = (u[s[2]] - 2.0 * uc + u[-s[2]]) * itt;
        const double uxt =
            (u[s[0] + s[2]] - u[s[0] - s[2]] - u[-s[0] + s[2]] + u[-s[0] - s[2]]) * ixt;
        const double uyt =
            (u[s[1] + s[2]] - u[s[1] - s[2]] - u[-s[1] + s[2]] + u[-s[1] - s[2]]) * iyt;
        out[o] = uxx + uyy + 4.0 * (c.x * c.x + c.y * c.y) * utt + 4.0 * c.y * uxt -
                 4.0 * c.x * uyt;
      }
    }
}

GridField refreshed(const GridField& u) {
  GridField e = u;
  e.apply_boundary();
  return e;
}

}  // namespace

HorizontalFields apply_fields(const GridField& u) {
  const auto& d = u.domain();
  HorizontalFields f{GridField(u.domain_ptr()), GridField(u.domain_ptr()), GridField(u.domain_ptr())};
  const auto n = d.dims();
  const auto h = d.spacing();
  const auto s = d.stride();
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n[2]); ++k)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n[1]); ++j)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n[0]); ++i) {
        const GaugePoint c = d.coordinate(i, j, k);
        const std::size_t o = d.offset(i, j, k);
        const double* v = u.values().data() + o;
        const double ux = (v[s[0]] - v[-s[0]]) / (2.0 * h[0]);
        const double uy = (v[s[1]] - v[-s[1]]) / (2.0 * h[1]);
        const double ut = (v[s[2]] - v[-s[2]]) / (2.0 * h[2]);
        f.x[o] = ux + 2.0 * c.y * ut;
        f.y[o] = uy - 2.0 * c.x * ut;
        f.t[o] = ut;
      }
  return f;
}

GridField sublaplacian(const GridField& u) {
  GridField out(u.domain_ptr());
  stencil(u.domain(), u.values(), out.values(), 0, 0);
  return out;
}

GridField bilaplacian(const GridField& u) {
  const auto& d = u.domain();
  const GridField e = refreshed(u);
  GridField w(u.domain_ptr());
  stencil(d, e.values(), w.values(), 0, 0);
  const double inv_cell = 1.0 / d.cell_volume();
  for (std::size_t o : d.physical_nodes()) w[o] *= d.energy_weight(o) * inv_cell;

  // Transpose: stencil on the zero-extended w over one extra layer, then fold
  // mirrored ghost contributions back onto their sources.
  GridField z(u.domain_ptr());
  stencil(d, w.values(), z.values(), -1, 1);
  GridField r(u.domain_ptr());
  const auto& map = d.extension_map();
  const auto n = d.dims();
  for (std::ptrdiff_t k = -1; k <= static_cast<std::ptrdiff_t>(n[2]); ++k)
    for (std::ptrdiff_t j = -1; j <= static_cast<std::ptrdiff_t>(n[1]); ++j)
      for (std::ptrdiff_t i = -1; i <= static_cast<std::ptrdiff_t>(n[0]); ++i) {
        const std::size_t p = d.offset(i, j, k);
        const std::size_t src = map[p];
        if (src != GridDomain::kNoSource) r[src] += z[p];
      }
  r.apply_boundary();
  return r;
}

double biharmonic_form(const GridField& u, const GridField& v) {
  require_same_domain(u, v, "biharmonic_form");
  const auto& d = u.domain();
  const GridField lu = sublaplacian(refreshed(u));
  const GridField lv = sublaplacian(refreshed(v));
  NeumaierSum s;
  for (std::size_t o : d.physical_nodes()) s.add(d.energy_weight(o) * lu[o] * lv[o]);
  return s.value();
}

double d022_norm(const GridField& u) { return std::sqrt(biharmonic_form(u, u)); }

}  // namespace heisadams
