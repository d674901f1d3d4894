#include "heisadams/extremals.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "heisadams/constants.hpp"
#include "heisadams/operators.hpp"
#include "heisadams/quadrature.hpp"
#include "heisadams/summation.hpp"

namespace heisadams {

namespace {

constexpr double kQ = 4.0;

double big_a() { return closed_form_constants().big_a; }

double require_ball(const GridDomain& d, const char* what) {
  const auto r = d.ball_radius();
  if (!r) throw std::invalid_argument(std::string(what) + ": grid must be a Koranyi ball");
  return *r;
}

}  // namespace

std::size_t resolved_rings(double ell, const GridDomain& ball) {
  const double radius = require_ball(ball, "resolved_rings");
  const double h = ball.spacing()[0];
  return static_cast<std::size_t>(std::floor(ell * radius / h + 1e-12));
}

CapacityProfile capacity_profile(double ell, const DomainPtr& grid, std::size_t min_rings,
                                 double cg_tolerance) {
  if (!(ell > 0.0 && ell < 1.0)) throw std::invalid_argument("capacity_profile: ell must lie in (0, 1)");
  const GridDomain& d = *grid;
  const double radius = require_ball(d, "capacity_profile");
  CapacityProfile out;
  out.ell = ell;
  out.rings = resolved_rings(ell, d);
  if (out.rings < min_rings)
    throw std::invalid_argument("capacity_profile: B_ell is not resolved by the grid");

  // Constrained set C (u = 1) and free set F.
  GridField fixed(grid), free_mask(grid);
  std::size_t n_fixed = 0;
  for (std::size_t o : d.unknowns()) {
    if (gauge(d.coordinate_of(o)) <= ell * radius) {
      fixed[o] = 1.0;
      ++n_fixed;
    } else {
      free_mask[o] = 1.0;
    }
  }
  if (n_fixed == 0) throw std::invalid_argument("capacity_profile: no grid node inside B_ell");

  auto mask = [&](GridField v) {
    for (std::size_t o : d.unknowns()) v[o] *= free_mask[o];
    return v;
  };
  const GridField rhs = -1.0 * mask(bilaplacian(fixed));
  GridField v(grid);
  out.solve = conjugate_gradient([&](const GridField& x) { return mask(bilaplacian(mask(x))); },
                                 rhs, v, cg_tolerance, 20 * d.unknowns().size() + 100);
  out.field = fixed + mask(v);
  out.field.apply_boundary();
  out.energy = biharmonic_form(out.field, out.field);
  out.bound = big_a() / (kQ * std::log(1.0 / ell));
  out.slack = out.energy / out.bound - 1.0;
  return out;
}

double adams_amplitude(double r, double big_r) {
  if (!(r > 0.0 && r < big_r)) throw std::invalid_argument("adams_amplitude: need 0 < r < R");
  return std::sqrt(kQ * std::log(big_r / r) / big_a());
}

double interpolate(const GridField& u, const GaugePoint& p) {
  const GridDomain& d = u.domain();
  const auto& h = d.spacing();
  const auto& half = d.half_extent();
  const auto& n = d.dims();
  const std::array<double, 3> c{p.x, p.y, p.t};
  std::array<std::ptrdiff_t, 3> base{};
  std::array<double, 3> frac{};
  for (int a = 0; a < 3; ++a) {
    const double s = (c[a] + half[a]) / h[a];
    const double last = static_cast<double>(n[a] - 1);
    if (s < -1e-12 || s > last + 1e-12) return 0.0;
    double f = std::floor(s);
    if (f >= last) f = last - 1.0;
    if (f < 0.0) f = 0.0;
    base[a] = static_cast<std::ptrdiff_t>(f);
    frac[a] = std::clamp(s - f, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    double w = 1.0;
    std::array<std::ptrdiff_t, 3> idx = base;
    for (int a = 0; a < 3; ++a) {
      if (corner & (1 << a)) {
        ++idx[a];
        w *= frac[a];
      } else {
        w *= 1.0 - frac[a];
      }
    }
    if (w != 0.0) sum += w * u.at(idx[0], idx[1], idx[2]);
  }
  return sum;
}

AdamsFunction adams_function(double r, double big_r, const DomainPtr& grid, std::size_t min_rings) {
  if (!(r > 0.0 && r < big_r)) throw std::invalid_argument("adams_function: need 0 < r < R");
  const GridDomain& d = *grid;
  const auto& half = d.half_extent();
  const double reach = d.ball_radius() ? *d.ball_radius()
                                       : std::min({half[0], half[1], std::sqrt(half[2])});
  if (big_r > reach * (1.0 + 1e-12))
    throw std::invalid_argument("adams_function: B_R must lie inside the domain");

  AdamsFunction out;
  out.r = r;
  out.big_r = big_r;
  out.plateau = adams_amplitude(r, big_r);
  const DomainPtr unit = GridDomain::koranyi_ball(d.dims()[0], 1.0);
  const CapacityProfile cap = capacity_profile(r / big_r, unit, min_rings);
  out.rings = cap.rings;

  out.field = GridField(grid);
  for (std::size_t o : d.unknowns()) {
    const GaugePoint p = d.coordinate_of(o);
    if (gauge(p) >= big_r) continue;
    out.field[o] = out.plateau * interpolate(cap.field, dilate(1.0 / big_r, p));
  }
  out.field.apply_boundary();
  out.norm_estimate = d022_norm(out.field);
  return out;
}

double annulus_measure(const GridDomain& ball, std::size_t offset, double inner) {
  const double m = ball.measure(offset);
  if (m == 0.0 || inner <= 0.0) return m;
  const auto& h = ball.spacing();
  const GaugePoint c = ball.coordinate_of(offset);
  if (gauge(c) >= inner + h[0] + std::sqrt(h[2])) return m;

  std::array<double, 3> lo{}, hi{};
  const std::array<double, 3> cc{c.x, c.y, c.t};
  const auto& half = ball.half_extent();
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::max(cc[a] - h[a] / 2, -half[a]);
    hi[a] = std::min(cc[a] + h[a] / 2, half[a]);
  }
  const std::array<double, 3> reach{inner, inner, inner * inner};
  bool contains = true;
  for (int a = 0; a < 3; ++a) contains = contains && lo[a] <= -reach[a] && hi[a] >= reach[a];
  if (contains) return m - std::numbers::pi * std::numbers::pi / 2.0 * std::pow(inner, 4);

  constexpr int sub = 8;
  int hits = 0;
  for (int q = 0; q < sub; ++q)
    for (int b = 0; b < sub; ++b)
      for (int s = 0; s < sub; ++s) {
        const GaugePoint p{lo[0] + (s + 0.5) * (hi[0] - lo[0]) / sub,
                           lo[1] + (b + 0.5) * (hi[1] - lo[1]) / sub,
                           lo[2] + (q + 0.5) * (hi[2] - lo[2]) / sub};
        if (gauge(p) < inner) ++hits;
      }
  const double clipped = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  return std::max(0.0, m - clipped * hits / double(sub * sub * sub));
}

std::vector<MEstimate> m_constant(int kmax, const std::vector<std::size_t>& ladder, MReading reading,
                                  const std::optional<double>& profile_override) {
  if (kmax < 2) throw std::invalid_argument("m_constant: kmax must be >= 2");
  if (ladder.empty()) throw std::invalid_argument("m_constant: empty grid ladder");
  std::vector<MEstimate> out;
  for (std::size_t n : ladder) {
    const DomainPtr ball = GridDomain::koranyi_ball(n, 1.0);
    for (int k = 2; k <= kmax; ++k) {
      const double ell = 1.0 / k;
      GridField u(ball, profile_override.value_or(0.0));
      if (!profile_override) u = capacity_profile(ell, ball, 0).field;
      const double scale = kQ * std::log(static_cast<double>(k));
      NeumaierSum sum;
      for (std::size_t o : ball->physical_nodes()) {
        const double m = annulus_measure(*ball, o, ell);
        if (m == 0.0) continue;
        const double g = reading == MReading::Squared ? u[o] * u[o] : std::abs(u[o]);
        sum.add(m * std::exp(scale * g));
      }
      out.push_back({n, k, sum.value()});
    }
  }
  return out;
}

double singular_mt_functional(const GridField& u, double beta, double a) {
  if (!(a >= 0.0 && a < 4.0)) throw std::invalid_argument("singular_mt_functional: a must lie in [0, 4)");
  if (!(beta >= 0.0)) throw std::invalid_argument("singular_mt_functional: beta must be non-negative");
  GridField e(u.domain_ptr());
  for (std::size_t o : u.domain().physical_nodes()) e[o] = std::exp(beta * u[o] * u[o]);
  return integrate_weighted(e, a);
}

std::vector<double> SharpnessTable::column(double beta) const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.beta == beta) v.push_back(r.value);
  return v;
}

SharpnessTable sharpness_probe(double a, const std::vector<double>& betas, const std::vector<int>& ks,
                               std::size_t n, double big_r) {
  SharpnessTable table;
  table.n = n;
  table.big_r = big_r;
  const DomainPtr ball = GridDomain::koranyi_ball(n, big_r);
  for (int k : ks) {
    if (k < 2) throw std::invalid_argument("sharpness_probe: k must be >= 2");
    const AdamsFunction af = adams_function(big_r / k, big_r, ball, 0);
    table.max_norm = std::max(table.max_norm, af.norm_estimate);
    for (double beta : betas)
      table.rows.push_back({k, beta, a, singular_mt_functional(af.field, beta, a), af.norm_estimate});
  }
  return table;
}

void write_sharpness_csv(std::ostream& os, const SharpnessTable& table) {
  os << "k,beta,a,value,normEstimate\n";
  os << std::setprecision(17);
  for (const auto& r : table.rows)
    os << r.k << ',' << r.beta << ',' << r.a << ',' << r.value << ',' << r.norm_estimate << '\n';
}

}  // namespace heisadams
