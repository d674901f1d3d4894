#include "heisadams/grid.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "heisadams/summation.hpp"

namespace heisadams {

struct GridDomain::WeightCache {
  std::mutex mutex;
  std::map<double, std::shared_ptr<const std::vector<double>>> weights;
};

namespace {

// Fraction of [c - h/2, c + h/2] inside [-L, L] along one axis (box nodes
// are on the lattice, so this is 1 or 1/2).
double clip_factor(std::ptrdiff_t idx, std::size_t n) {
  return (idx == 0 || idx == static_cast<std::ptrdiff_t>(n) - 1) ? 0.5 : 1.0;
}

// Gauss-Legendre 3-point nodes/weights on [-1/2, 1/2].
constexpr std::array<double, 3> kGl3Nodes{-0.3872983346207417, 0.0, 0.3872983346207417};
constexpr std::array<double, 3> kGl3Weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Integral of rho^{-a} over the cell [-hx/2,hx/2]x[-hy/2,hy/2]x[-ht/2,ht/2].
// Integral of rho^{-a} over the box [lo, hi], which must not contain the
// origin: adaptive Gauss-Kronrod in t (the peak near t = 0 has width |z|^2),
// composite 3-point Gauss-Legendre in x and y refined until two levels agree.
double box_integral(double a, const std::array<double, 3>& lo, const std::array<double, 3>& hi) {
  using boost::math::quadrature::gauss_kronrod;
  auto column = [&](double x, double y) {
    const double r2 = x * x + y * y;
    auto f = [&](double t) { return std::pow(r2 * r2 + t * t, -a / 4.0); };
    if (lo[2] < 0.0 && hi[2] > 0.0)
      return gauss_kronrod<double, 15>::integrate(f, lo[2], 0.0, 12, 1e-10) +
             gauss_kronrod<double, 15>::integrate(f, 0.0, hi[2], 12, 1e-10);
    return gauss_kronrod<double, 15>::integrate(f, lo[2], hi[2], 12, 1e-10);
  };
  auto integral = [&](int m) {
    NeumaierSum sum;
    const double sx = (hi[0] - lo[0]) / m, sy = (hi[1] - lo[1]) / m;
    for (int b = 0; b < m; ++b)
      for (int s = 0; s < m; ++s)
        for (int gx = 0; gx < 3; ++gx)
          for (int gy = 0; gy < 3; ++gy)
            sum.add(kGl3Weights[gx] * kGl3Weights[gy] *
                    column(lo[0] + (s + 0.5 + kGl3Nodes[gx]) * sx, lo[1] + (b + 0.5 + kGl3Nodes[gy]) * sy));
    return sum.value() * sx * sy;
  };
  double prev = integral(1);
  for (int m = 2; m <= 64; m *= 2) {
    const double next = integral(m);
    if (std::abs(next - prev) <= 1e-10 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

// Tensor N-point Gauss-Legendre mean of rho^{-a} over a cell.
template <unsigned N>
double tensor_mean(double a, const GaugePoint& c, const std::array<double, 3>& h) {
  using boost::math::quadrature::gauss;
  auto fx = [&](double x) {
    auto fy = [&](double y) {
      const double r2 = x * x + y * y;
      auto ft = [&](double t) { return std::pow(r2 * r2 + t * t, -a / 4.0); };
      return gauss<double, N>::integrate(ft, c.t - h[2] / 2, c.t + h[2] / 2);
    };
    return gauss<double, N>::integrate(fy, c.y - h[1] / 2, c.y + h[1] / 2);
  };
  return gauss<double, N>::integrate(fx, c.x - h[0] / 2, c.x + h[0] / 2) / (h[0] * h[1] * h[2]);
}

double cell_average(double a, const GaugePoint& c, const std::array<double, 3>& h) {
  // Two tensor rules agree on cells well away from the origin.
  const double hi = tensor_mean<10>(a, c, h);
  if (std::abs(hi - tensor_mean<8>(a, c, h)) <= 1e-10 * hi) return hi;
  return box_integral(a, {c.x - h[0] / 2, c.y - h[1] / 2, c.t - h[2] / 2},
                      {c.x + h[0] / 2, c.y + h[1] / 2, c.t + h[2] / 2}) /
         (h[0] * h[1] * h[2]);
}

// The origin cell C and its dilate D = delta_{1/2} C satisfy
// int_D = 2^{a-4} int_C, so int_C = int_{C \ D} / (1 - 2^{a-4}). The shell
// splits into two t-slabs and four side blocks, none containing the origin.
double origin_cell_integral(double a, const std::array<double, 3>& h) {
  const double x = h[0] / 2, y = h[1] / 2, t = h[2] / 2;
  const double xi = x / 2, yi = y / 2, ti = t / 4;
  NeumaierSum shell;
  shell.add(box_integral(a, {-x, -y, ti}, {x, y, t}));
  shell.add(box_integral(a, {-x, -y, -t}, {x, y, -ti}));
  shell.add(box_integral(a, {xi, -y, -ti}, {x, y, ti}));
  shell.add(box_integral(a, {-x, -y, -ti}, {-xi, y, ti}));
  shell.add(box_integral(a, {-xi, yi, -ti}, {xi, y, ti}));
  shell.add(box_integral(a, {-xi, -y, -ti}, {xi, -yi, ti}));
  return shell.value() / (1.0 - std::pow(2.0, a - 4.0));
}

}  // namespace

DomainPtr GridDomain::box(std::array<std::size_t, 3> n, std::array<double, 3> half_extent) {
  for (int d = 0; d < 3; ++d) {
    if (n[d] < 3) throw std::invalid_argument("GridDomain::box: need at least 3 nodes per axis");
    if (!(half_extent[d] > 0.0)) throw std::invalid_argument("GridDomain::box: extents must be positive");
  }
  std::shared_ptr<GridDomain> g(new GridDomain());
  g->n_ = n;
  g->half_ = half_extent;
  g->policy_ = BoundaryPolicy::ClampedReflect;
  g->region_contains_origin_ = true;
  for (int d = 0; d < 3; ++d) g->h_[d] = 2.0 * half_extent[d] / static_cast<double>(n[d] - 1);
  g->allocate();

  const double cell = g->cell_volume();
  for (std::size_t k = 0; k < n[2]; ++k)
    for (std::size_t j = 0; j < n[1]; ++j)
      for (std::size_t i = 0; i < n[0]; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i), jj = static_cast<std::ptrdiff_t>(j),
                   kk = static_cast<std::ptrdiff_t>(k);
        const std::size_t o = g->offset(ii, jj, kk);
        const double m = cell * clip_factor(ii, n[0]) * clip_factor(jj, n[1]) * clip_factor(kk, n[2]);
        g->measure_[o] = m;
        g->energy_weight_[o] = m;
        const bool interior = i > 0 && j > 0 && k > 0 && i + 1 < n[0] && j + 1 < n[1] && k + 1 < n[2];
        g->unknown_[o] = interior ? 1 : 0;
      }
  g->finalize();
  return g;
}

DomainPtr GridDomain::koranyi_ball(std::size_t n, double radius) {
  if (n < 5) throw std::invalid_argument("GridDomain::koranyi_ball: need at least 5 nodes per axis");
  if (!(radius > 0.0)) throw std::invalid_argument("GridDomain::koranyi_ball: radius must be positive");
  std::shared_ptr<GridDomain> g(new GridDomain());
  g->n_ = {n, n, n};
  g->half_ = {radius, radius, radius * radius};
  g->policy_ = BoundaryPolicy::ZeroExtension;
  g->ball_radius_ = radius;
  g->region_contains_origin_ = true;
  for (int d = 0; d < 3; ++d) g->h_[d] = 2.0 * g->half_[d] / static_cast<double>(n - 1);
  g->allocate();

  const auto& h = g->h_;
  const double cell = g->cell_volume();
  constexpr int sub = 8;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<std::ptrdiff_t>(i), jj = static_cast<std::ptrdiff_t>(j),
                   kk = static_cast<std::ptrdiff_t>(k);
        const std::size_t o = g->offset(ii, jj, kk);
        const GaugePoint c = g->coordinate(ii, jj, kk);
        g->energy_weight_[o] = cell;
        const bool interior = i > 0 && j > 0 && k > 0 && i + 1 < n && j + 1 < n && k + 1 < n;
        g->unknown_[o] = (interior && gauge(c) < radius) ? 1 : 0;

        // Cell clipped to the bounding box, then intersected with the ball.
        std::array<double, 3> lo{}, hi{};
        const std::array<double, 3> cc{c.x, c.y, c.t};
        for (int d = 0; d < 3; ++d) {
          lo[d] = std::max(cc[d] - h[d] / 2, -g->half_[d]);
          hi[d] = std::min(cc[d] + h[d] / 2, g->half_[d]);
        }
        int inside_corners = 0;
        for (int corner = 0; corner < 8; ++corner) {
          const GaugePoint p{(corner & 1) ? hi[0] : lo[0], (corner & 2) ? hi[1] : lo[1],
                             (corner & 4) ? hi[2] : lo[2]};
          if (gauge(p) <= radius) ++inside_corners;
        }
        const double clipped = (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
        double fraction = 0.0;
        if (inside_corners == 8) {
          fraction = 1.0;  // the ball is convex
        } else if (inside_corners > 0 || gauge(c) < 1.5 * radius) {
          int hits = 0;
          for (int a = 0; a < sub; ++a)
            for (int b = 0; b < sub; ++b)
              for (int q = 0; q < sub; ++q) {
                const GaugePoint p{lo[0] + (q + 0.5) * (hi[0] - lo[0]) / sub,
                                   lo[1] + (b + 0.5) * (hi[1] - lo[1]) / sub,
                                   lo[2] + (a + 0.5) * (hi[2] - lo[2]) / sub};
                if (gauge(p) <= radius) ++hits;
              }
          fraction = static_cast<double>(hits) / (sub * sub * sub);
        }
        g->measure_[o] = clipped * fraction;
      }
  g->finalize();
  return g;
}

void GridDomain::allocate() {
  for (int d = 0; d < 3; ++d) padded_[d] = n_[d] + 2 * kGhost;
  const std::size_t total = padded_count();
  unknown_.assign(total, 0);
  measure_.assign(total, 0.0);
  energy_weight_.assign(total, 0.0);
  cache_ = std::make_shared<WeightCache>();
}

void GridDomain::finalize() {
  const std::size_t total = padded_count();
  unknown_offsets_.clear();
  physical_offsets_.clear();
  NeumaierSum tm;
  for (std::size_t k = 0; k < n_[2]; ++k)
    for (std::size_t j = 0; j < n_[1]; ++j)
      for (std::size_t i = 0; i < n_[0]; ++i) {
        const std::size_t o = offset(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j),
                                     static_cast<std::ptrdiff_t>(k));
        physical_offsets_.push_back(o);
        if (unknown_[o]) unknown_offsets_.push_back(o);
        tm.add(measure_[o]);
      }
  total_measure_ = tm.value();

  origin_.reset();
  if (n_[0] % 2 == 1 && n_[1] % 2 == 1 && n_[2] % 2 == 1) {
    origin_ = offset(static_cast<std::ptrdiff_t>(n_[0] / 2), static_cast<std::ptrdiff_t>(n_[1] / 2),
                     static_cast<std::ptrdiff_t>(n_[2] / 2));
  }

  extension_map_.assign(total, kNoSource);
  for (std::ptrdiff_t k = -kGhost; k < static_cast<std::ptrdiff_t>(n_[2]) + kGhost; ++k)
    for (std::ptrdiff_t j = -kGhost; j < static_cast<std::ptrdiff_t>(n_[1]) + kGhost; ++j)
      for (std::ptrdiff_t i = -kGhost; i < static_cast<std::ptrdiff_t>(n_[0]) + kGhost; ++i) {
        const auto src = extension_source(i, j, k);
        if (src) extension_map_[offset(i, j, k)] = *src;
      }
}

std::optional<std::size_t> GridDomain::extension_source(std::ptrdiff_t i, std::ptrdiff_t j,
                                                        std::ptrdiff_t k) const {
  std::array<std::ptrdiff_t, 3> idx{i, j, k};
  for (int d = 0; d < 3; ++d) {
    const auto last = static_cast<std::ptrdiff_t>(n_[d]) - 1;
    if (idx[d] < 0 || idx[d] > last) {
      if (policy_ == BoundaryPolicy::ZeroExtension) return std::nullopt;
      idx[d] = idx[d] < 0 ? -idx[d] : 2 * last - idx[d];
    }
  }
  const std::size_t o = offset(idx[0], idx[1], idx[2]);
  if (!unknown_[o]) return std::nullopt;
  return o;
}

std::shared_ptr<const std::vector<double>> GridDomain::singular_weight(double a) const {
  if (!(a >= 0.0)) throw std::invalid_argument("singular_weight: exponent must be non-negative");
  if (a >= 4.0 && contains_origin())
    throw std::invalid_argument("singular_weight: exponent must be < 4 when the origin is in the domain");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->weights.find(a);
  if (it != cache_->weights.end()) return it->second;

  auto w = std::make_shared<std::vector<double>>(padded_count(), 1.0);
  if (a != 0.0) {
    for (std::ptrdiff_t k = -kGhost; k < static_cast<std::ptrdiff_t>(n_[2]) + kGhost; ++k)
      for (std::ptrdiff_t j = -kGhost; j < static_cast<std::ptrdiff_t>(n_[1]) + kGhost; ++j)
        for (std::ptrdiff_t i = -kGhost; i < static_cast<std::ptrdiff_t>(n_[0]) + kGhost; ++i) {
          const double r = gauge(coordinate(i, j, k));
          (*w)[offset(i, j, k)] = r > 0.0 ? std::pow(r, -a) : 0.0;
        }
    // Physical nodes carry the mean over their full cell. The mean only
    // depends on (|x|, |y|, |t|), and on the unordered pair when hx = hy.
    std::map<std::array<long long, 3>, double> memo;
    for (std::size_t o : physical_offsets_) {
      if (origin_ && o == *origin_) continue;
      const GaugePoint p = coordinate_of(o);
      std::array<long long, 3> key{std::llround(std::abs(p.x) / h_[0] * 1e9),
                                   std::llround(std::abs(p.y) / h_[1] * 1e9),
                                   std::llround(std::abs(p.t) / h_[2] * 1e9)};
      if (h_[0] == h_[1] && key[0] > key[1]) std::swap(key[0], key[1]);
      auto it = memo.find(key);
      if (it == memo.end()) it = memo.emplace(key, cell_average(a, p, h_)).first;
      (*w)[o] = it->second;
    }
    if (origin_) (*w)[*origin_] = origin_cell_integral(a, h_) / cell_volume();
  }
  cache_->weights.emplace(a, w);
  return w;
}

bool GridDomain::same_geometry(const GridDomain& o) const {
  return n_ == o.n_ && h_ == o.h_ && half_ == o.half_ && policy_ == o.policy_ &&
         ball_radius_ == o.ball_radius_;
}

GridField::GridField(DomainPtr domain, double fill) : domain_(std::move(domain)) {
  if (!domain_) throw std::invalid_argument("GridField: null domain");
  values_.assign(domain_->padded_count(), fill);
}

GridField GridField::from_function(DomainPtr domain,
                                   const std::function<double(const GaugePoint&)>& f) {
  GridField u(std::move(domain));
  const auto& d = u.domain();
  const auto n = d.dims();
  for (std::ptrdiff_t k = -GridDomain::kGhost; k < static_cast<std::ptrdiff_t>(n[2]) + GridDomain::kGhost; ++k)
    for (std::ptrdiff_t j = -GridDomain::kGhost; j < static_cast<std::ptrdiff_t>(n[1]) + GridDomain::kGhost; ++j)
      for (std::ptrdiff_t i = -GridDomain::kGhost; i < static_cast<std::ptrdiff_t>(n[0]) + GridDomain::kGhost; ++i)
        u.at(i, j, k) = f(d.coordinate(i, j, k));
  return u;
}

void GridField::apply_boundary() {
  const auto& map = domain_->extension_map();
  for (std::size_t o = 0; o < values_.size(); ++o) {
    const std::size_t src = map[o];
    if (src == GridDomain::kNoSource)
      values_[o] = 0.0;
    else if (src != o)
      values_[o] = values_[src];
  }
}

void require_same_domain(const GridField& u, const GridField& v, const char* what) {
  if (u.domain_ptr() != v.domain_ptr() && !u.domain().same_geometry(v.domain()))
    throw std::invalid_argument(std::string(what) + ": fields live on different domains");
}

GridField& GridField::operator+=(const GridField& o) {
  require_same_domain(*this, o, "operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  require_same_domain(*this, o, "operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void GridField::axpy(double s, const GridField& o) {
  require_same_domain(*this, o, "axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }

double unknown_dot(const GridField& u, const GridField& v) {
  require_same_domain(u, v, "unknown_dot");
  NeumaierSum s;
  for (std::size_t o : u.domain().unknowns()) s.add(u[o] * v[o]);
  return s.value();
}

}  // namespace heisadams
