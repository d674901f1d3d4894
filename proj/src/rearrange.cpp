#include "heisadams/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "heisadams/summation.hpp"

namespace heisadams {

RearrangementProfile RearrangementProfile::from_pairs(std::vector<std::pair<double, double>> pairs) {
  std::erase_if(pairs, [](const auto& p) { return !(p.second > 0.0); });
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  RearrangementProfile r;
  r.ends_.reserve(pairs.size());
  r.values_.reserve(pairs.size());
  NeumaierSum cum;
  for (const auto& [v, m] : pairs) {
    cum.add(m);
    r.ends_.push_back(cum.value());
    r.values_.push_back(v);
  }
  return r;
}

double RearrangementProfile::operator()(double t) const {
  if (values_.empty() || t > total_measure()) return 0.0;
  if (t <= 0.0) return values_.front();
  // First step whose end is >= t.
  const auto it = std::lower_bound(ends_.begin(), ends_.end(), t);
  return values_[static_cast<std::size_t>(it - ends_.begin())];
}

double RearrangementProfile::integral_to(double t) const {
  NeumaierSum s;
  double prev = 0.0;
  for (std::size_t i = 0; i < ends_.size() && prev < t; ++i) {
    const double hi = std::min(ends_[i], t);
    s.add(values_[i] * (hi - prev));
    prev = ends_[i];
  }
  return s.value();
}

double RearrangementProfile::lp_integral(double p) const {
  NeumaierSum s;
  double prev = 0.0;
  for (std::size_t i = 0; i < ends_.size(); ++i) {
    s.add(std::pow(std::abs(values_[i]), p) * (ends_[i] - prev));
    prev = ends_[i];
  }
  return s.value();
}

double distribution(const GridField& f, double s) {
  const auto& d = f.domain();
  NeumaierSum m;
  for (std::size_t o : d.physical_nodes())
    if (f[o] > s) m.add(d.measure(o));
  return m.value();
}

namespace {

RearrangementProfile rearrange_values(const GridField& f, bool absolute) {
  const auto& d = f.domain();
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(d.physical_nodes().size());
  // physical_nodes() is in increasing offset order, so the stable sort breaks
  // ties by offset.
  for (std::size_t o : d.physical_nodes())
    pairs.emplace_back(absolute ? std::abs(f[o]) : f[o], d.measure(o));
  return RearrangementProfile::from_pairs(std::move(pairs));
}

}  // namespace

RearrangementProfile decreasing_rearrangement(const GridField& f) {
  return rearrange_values(f, false);
}

double double_star(const RearrangementProfile& p, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("double_star: t must be positive");
  return p.integral_to(t) / t;
}

double product_integral(const RearrangementProfile& p, const RearrangementProfile& q, double from) {
  const auto& pe = p.ends();
  const auto& qe = q.ends();
  NeumaierSum s;
  std::size_t i = 0, j = 0;
  double prev = 0.0;
  while (i < pe.size() && j < qe.size()) {
    const double hi = std::min(pe[i], qe[j]);
    const double lo = std::max(prev, from);
    if (hi > lo) s.add(p.values()[i] * q.values()[j] * (hi - lo));
    prev = hi;
    if (pe[i] == hi) ++i;
    if (qe[j] == hi) ++j;
  }
  return s.value();
}

double hardy_littlewood_slack(const GridField& f, const GridField& g) {
  require_same_domain(f, g, "hardy_littlewood_slack");
  const auto& d = f.domain();
  NeumaierSum lhs;
  for (std::size_t o : d.physical_nodes()) lhs.add(std::abs(f[o] * g[o]) * d.measure(o));
  const double rhs = product_integral(rearrange_values(f, true), rearrange_values(g, true));
  return rhs - lhs.value();
}

ONeilReport oneil_check(const GridField& f, const RadialKernel& kernel, double t) {
  const auto& d = f.domain();
  const double total = d.total_measure();
  if (!(t > 0.0 && t < total)) throw std::invalid_argument("oneil_check: t must lie in (0, |Omega|)");

  const ConvolutionMatrix k = convolution_matrix(d, d, kernel);
  for (double e : k.entries)
    if (e < 0.0) throw std::invalid_argument("oneil_check: kernel must be non-negative");

  // |U| = |K (f mu)|, rearranged over the target measure.
  GridField u(f.domain_ptr());
  for (std::size_t r = 0; r < k.rows; ++r) {
    NeumaierSum s;
    for (std::size_t c = 0; c < k.cols; ++c) {
      const std::size_t o = k.col_offsets[c];
      s.add(k.entries[r * k.cols + c] * f[o] * d.measure(o));
    }
    u[k.row_offsets[r]] = std::abs(s.value());
  }
  const RearrangementProfile ustar = decreasing_rearrangement(u);
  const RearrangementProfile fstar = rearrange_values(f, true);

  // Envelope G* over the rearrangements of all rows and columns.
  std::vector<RearrangementProfile> parts;
  parts.reserve(k.rows + k.cols);
  for (std::size_t r = 0; r < k.rows; ++r) {
    std::vector<std::pair<double, double>> row;
    for (std::size_t c = 0; c < k.cols; ++c)
      row.emplace_back(k.entries[r * k.cols + c], d.measure(k.col_offsets[c]));
    parts.push_back(RearrangementProfile::from_pairs(std::move(row)));
  }
  for (std::size_t c = 0; c < k.cols; ++c) {
    std::vector<std::pair<double, double>> col;
    for (std::size_t r = 0; r < k.rows; ++r)
      col.emplace_back(k.entries[r * k.cols + c], d.measure(k.row_offsets[r]));
    parts.push_back(RearrangementProfile::from_pairs(std::move(col)));
  }
  std::vector<double> breaks;
  for (const auto& p : parts) breaks.insert(breaks.end(), p.ends().begin(), p.ends().end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<std::pair<double, double>> envelope;
  envelope.reserve(breaks.size());
  double prev = 0.0;
  for (double b : breaks) {
    double best = 0.0;
    for (const auto& p : parts) best = std::max(best, p(b));
    envelope.emplace_back(best, b - prev);
    prev = b;
  }
  // Envelope values are already non-increasing; from_pairs keeps their order.
  const RearrangementProfile gstar = RearrangementProfile::from_pairs(std::move(envelope));

  ONeilReport rep;
  rep.u_star = ustar(t);
  rep.u_double_star = double_star(ustar, t);
  rep.bound = t * double_star(fstar, t) * double_star(gstar, t) + product_integral(fstar, gstar, t);
  rep.slack = std::min(rep.u_double_star - rep.u_star, rep.bound - rep.u_double_star);
  rep.scale = std::max(std::abs(rep.bound), std::abs(rep.u_double_star));
  return rep;
}

double oneil_slack(const GridField& f, const RadialKernel& kernel, double t) {
  return oneil_check(f, kernel, t).slack;
}

OneDReduction one_d_reduction(const GridField& f, int samples_per_decade) {
  if (samples_per_decade < 1) throw std::invalid_argument("one_d_reduction: need >= 1 sample per decade");
  const auto& d = f.domain();
  for (std::size_t o : d.physical_nodes())
    if (d.measure(o) > 0.0 && f[o] < 0.0)
      throw std::invalid_argument("one_d_reduction: field must be non-negative");

  const RearrangementProfile fs = decreasing_rearrangement(f);
  const double omega = fs.total_measure();
  OneDReduction out;
  out.integral_f2 = fs.lp_integral(2.0);
  if (omega <= 0.0) return out;

  const double s_max = std::log(omega / d.cell_volume());
  const double ds = std::log(10.0) / samples_per_decade;
  for (double s = 0.0; s < s_max; s += ds) out.s.push_back(s);
  out.s.push_back(s_max);
  for (double s : out.s)
    out.phi.push_back(std::sqrt(omega) * fs(omega * std::exp(-s)) * std::exp(-s / 2.0));

  NeumaierSum integral;
  for (std::size_t i = 1; i < out.s.size(); ++i)
    integral.add(0.5 * (out.s[i] - out.s[i - 1]) *
                 (out.phi[i] * out.phi[i] + out.phi[i - 1] * out.phi[i - 1]));
  // Tail s > s_max is tau = |Omega| e^{-s} in (0, h^3): exact on the profile.
  const double tau_min = omega * std::exp(-s_max);
  NeumaierSum tail;
  double prev = 0.0;
  for (std::size_t i = 0; i < fs.ends().size() && prev < tau_min; ++i) {
    const double hi = std::min(fs.ends()[i], tau_min);
    tail.add(fs.values()[i] * fs.values()[i] * (hi - prev));
    prev = fs.ends()[i];
  }
  integral.add(tail.value());
  out.integral_phi2 = integral.value();
  out.l2_defect = std::abs(out.integral_f2 - out.integral_phi2);
  return out;
}

void write_profile_csv(std::ostream& out, const RearrangementProfile& p) {
  out << "measure,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < p.ends().size(); ++i) out << p.ends()[i] << ',' << p.values()[i] << '\n';
}

}  // namespace heisadams
