#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heisadams/operators.hpp"
#include "heisadams/summation.hpp"
#include "heisadams/varsolve.hpp"

namespace heisadams {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Energy restricted to the segment p + tau (q - p), tau in [0, 1]. The
// quadratic part is expanded once so each evaluation costs one potential sum.
class SegmentEnergy {
 public:
  SegmentEnergy(const GridField& p, const GridField& q, const NonlinearitySpec& nl,
                const std::vector<double>& weight)
      : p_(p), d_(q - p), nl_(nl), weight_(weight) {
    pp_ = biharmonic_form(p_, p_);
    pd_ = biharmonic_form(p_, d_);
    dd_ = biharmonic_form(d_, d_);
  }

  double operator()(double tau) const {
    const auto& dom = p_.domain();
    NeumaierSum pot;
    for (std::size_t o : dom.unknowns()) {
      const double m = dom.measure(o);
      if (m == 0.0) continue;
      pot.add(nl_.big_f(dom.coordinate_of(o), p_[o] + tau * d_[o]) * weight_[o] * m);
    }
    return 0.5 * (pp_ + 2.0 * tau * pd_ + tau * tau * dd_) - pot.value();
  }

  GridField point(double tau) const {
    GridField r = p_;
    r.axpy(tau, d_);
    return r;
  }

 private:
  const GridField& p_;
  GridField d_;
  const NonlinearitySpec& nl_;
  const std::vector<double>& weight_;
  double pp_ = 0.0, pd_ = 0.0, dd_ = 0.0;
};

struct SegmentMax {
  double value = -std::numeric_limits<double>::infinity();
  double tau = 0.0;
};

// Golden-section search for the maximum of J on a segment; the endpoint
// values take part so that a maximum at a vertex is reproduced exactly.
SegmentMax segment_max(const SegmentEnergy& e, double j0, double j1) {
  double lo = 0.0, hi = 1.0;
  double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
  double f1 = e(x1), f2 = e(x2);
  while (hi - lo > 1e-7) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = e(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = e(x2);
    }
  }
  SegmentMax best{j0, 0.0};
  if (j1 > best.value) best = {j1, 1.0};
  const double xm = f1 >= f2 ? x1 : x2;
  const double fm = std::max(f1, f2);
  if (fm > best.value) best = {fm, xm};
  return best;
}

class Path {
 public:
  Path(const NonlinearitySpec& nl, double a, std::shared_ptr<const std::vector<double>> w)
      : nl_(nl), a_(a), w_(std::move(w)) {}

  void reset(std::vector<GridField> pts) {
    pts_ = std::move(pts);
    energy_.clear();
    for (const auto& p : pts_) energy_.push_back(heisadams::energy(p, nl_, a_));
    seg_.clear();
    for (std::size_t s = 0; s + 1 < pts_.size(); ++s) seg_.push_back(measure_segment(s));
  }

  SegmentMax measure_segment(std::size_t s) const {
    return measure(pts_[s], pts_[s + 1], energy_[s], energy_[s + 1]);
  }
  SegmentMax measure(const GridField& p, const GridField& q, double jp, double jq) const {
    return segment_max(SegmentEnergy(p, q, nl_, *w_), jp, jq);
  }

  double level() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& s : seg_) m = std::max(m, s.value);
    return m;
  }

  std::size_t max_segment() const {
    std::size_t best = 0;
    for (std::size_t s = 1; s < seg_.size(); ++s)
      if (seg_[s].value > seg_[best].value) best = s;
    return best;
  }

  // Makes the path maximum a vertex and returns its index.
  std::size_t promote_maximum() {
    const std::size_t s = max_segment();
    const double tau = seg_[s].tau;
    if (tau <= 1e-6) return s;
    if (tau >= 1.0 - 1e-6) return s + 1;
    SegmentEnergy e(pts_[s], pts_[s + 1], nl_, *w_);
    GridField mid = e.point(tau);
    const double jm = seg_[s].value;
    pts_.insert(pts_.begin() + static_cast<std::ptrdiff_t>(s + 1), std::move(mid));
    energy_.insert(energy_.begin() + static_cast<std::ptrdiff_t>(s + 1), jm);
    seg_[s] = measure_segment(s);
    seg_.insert(seg_.begin() + static_cast<std::ptrdiff_t>(s + 1), measure_segment(s + 1));
    return s + 1;
  }

  // Tentatively replaces vertex k; returns the new maxima of its two segments.
  std::pair<SegmentMax, SegmentMax> trial(std::size_t k, const GridField& v, double jv) const {
    return {measure(pts_[k - 1], v, energy_[k - 1], jv), measure(v, pts_[k + 1], jv, energy_[k + 1])};
  }

  void commit(std::size_t k, GridField v, double jv, const std::pair<SegmentMax, SegmentMax>& segs) {
    pts_[k] = std::move(v);
    energy_[k] = jv;
    seg_[k - 1] = segs.first;
    seg_[k] = segs.second;
  }

  // Drops interior vertices with the shortest chords while the path has more
  // than `target` points, provided the merged segment stays below `ceiling`.
  void thin(std::size_t target, std::size_t keep, double ceiling) {
    while (pts_.size() > target) {
      std::vector<std::pair<double, std::size_t>> order;
      for (std::size_t j = 1; j + 1 < pts_.size(); ++j) {
        if (j == keep) continue;
        order.emplace_back(d022_norm(pts_[j + 1] - pts_[j - 1]), j);
      }
      std::sort(order.begin(), order.end());
      bool removed = false;
      for (const auto& [chord, j] : order) {
        const SegmentMax merged = measure(pts_[j - 1], pts_[j + 1], energy_[j - 1], energy_[j + 1]);
        if (merged.value > ceiling) continue;
        pts_.erase(pts_.begin() + static_cast<std::ptrdiff_t>(j));
        energy_.erase(energy_.begin() + static_cast<std::ptrdiff_t>(j));
        seg_.erase(seg_.begin() + static_cast<std::ptrdiff_t>(j));
        seg_[j - 1] = merged;
        if (keep > j) --keep;
        removed = true;
        break;
      }
      if (!removed) return;
    }
  }

  const std::vector<GridField>& points() const { return pts_; }
  const GridField& point(std::size_t k) const { return pts_[k]; }
  double energy_at(std::size_t k) const { return energy_[k]; }

 private:
  const NonlinearitySpec& nl_;
  double a_;
  std::shared_ptr<const std::vector<double>> w_;
  std::vector<GridField> pts_;
  std::vector<double> energy_;
  std::vector<SegmentMax> seg_;
};

}  // namespace

GridField default_bump(const DomainPtr& domain) {
  const auto& d = *domain;
  GridField u(domain);
  const auto half = d.half_extent();
  const auto radius = d.ball_radius();
  for (std::size_t o : d.unknowns()) {
    const GaugePoint p = d.coordinate_of(o);
    if (radius) {
      const double s = std::pow(gauge(p) / *radius, 4);
      u[o] = s < 1.0 ? (1.0 - s) * (1.0 - s) : 0.0;
    } else {
      auto b = [](double x, double l) {
        const double r = 1.0 - (x / l) * (x / l);
        return r * r;
      };
      u[o] = b(p.x, half[0]) * b(p.y, half[1]) * b(p.t, half[2]);
    }
  }
  u.apply_boundary();
  return u;
}

MountainPassResult mountain_pass_solve(const NonlinearitySpec& nl, double a,
                                       const DomainPtr& domain, const MountainPassOptions& opts) {
  if (!(a >= 0.0 && a < 4.0)) throw std::invalid_argument("mountain_pass_solve: a must lie in [0, 4)");
  if (opts.path_points < 3) throw std::invalid_argument("mountain_pass_solve: path needs >= 3 points");
  GridField u0 = opts.initial_direction ? *opts.initial_direction : default_bump(domain);
  const DomainPtr dom = u0.domain_ptr();
  if (!dom) throw std::invalid_argument("mountain_pass_solve: no domain");
  u0.apply_boundary();
  const double n0 = d022_norm(u0);
  if (!(n0 > 0.0)) throw std::invalid_argument("mountain_pass_solve: zero initial direction");
  u0 *= 1.0 / n0;

  MountainPassResult out{GridField(dom), {}};
  MountainPassState& st = out.state;

  double t = 1.0;
  double je = energy(t * u0, nl, a);
  while (!(je < 0.0)) {
    t *= 2.0;
    if (t > opts.t_max) {
      st.status = SolveStatus::GeometryFailure;
      st.endpoint_energy = je;
      st.path_points = {GridField(dom), t / 2.0 * u0};
      return out;
    }
    je = energy(t * u0, nl, a);
  }
  st.endpoint_energy = je;

  std::vector<GridField> init;
  for (std::size_t i = 0; i < opts.path_points; ++i)
    init.push_back((t * static_cast<double>(i) / static_cast<double>(opts.path_points - 1)) * u0);
  Path path(nl, a, dom->singular_weight(a));
  path.reset(std::move(init));

  double level = path.level();
  st.status = SolveStatus::MaxIterations;
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    const std::size_t k = path.promote_maximum();
    const GridField& uk = path.point(k);
    const double jk = path.energy_at(k);
    GridField r;
    const double res = dual_residual(grad_energy(uk, nl, a), opts.cg_tolerance, &r);
    const double norm = d022_norm(uk);
    st.history.push_back({it, level, res, norm});
    out.u = uk;
    st.maximizer_index = k;
    st.grad_residual = res;
    st.level_estimate = level;

    if (res <= opts.tol * std::max(1.0, norm)) {
      st.status = norm > opts.triviality_floor ? SolveStatus::Converged : SolveStatus::Trivial;
      break;
    }

    // Armijo backtracking along the Sobolev gradient; a step is accepted only
    // if the path maximum does not rise.
    bool accepted = false;
    double step = opts.initial_step;
    for (int bt = 0; bt < 60 && !accepted; ++bt, step *= 0.5) {
      GridField v = uk;
      v.axpy(-step, r);
      const double jv = energy(v, nl, a);
      if (!(jv <= jk - opts.armijo * step * res * res)) continue;
      const auto segs = path.trial(k, v, jv);
      if (segs.first.value > level || segs.second.value > level) continue;
      path.commit(k, std::move(v), jv, segs);
      accepted = true;
    }
    if (!accepted) {
      st.status = SolveStatus::Stagnation;
      break;
    }
    level = path.level();
    path.thin(opts.path_points, k, level);
    level = path.level();
  }
  st.path_points = path.points();
  return out;
}

}  // namespace heisadams
