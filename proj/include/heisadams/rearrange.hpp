#pragma once

#include <iosfwd>
#include <vector>

#include "heisadams/grid.hpp"
#include "heisadams/quadrature.hpp"

namespace heisadams {

/// Non-increasing step function f* on (0, |Omega|].
///
/// Step i holds value values[i] on (ends[i-1], ends[i]] (ends[-1] = 0), so at
/// a jump the larger value is taken. Beyond total_measure f* is zero.
class RearrangementProfile {
 public:
  RearrangementProfile() = default;
  /// Builds from (value, measure) pairs; zero measures are dropped, values
  /// are sorted descending with ties kept in input order.
  static RearrangementProfile from_pairs(std::vector<std::pair<double, double>> pairs);

  const std::vector<double>& ends() const { return ends_; }
  const std::vector<double>& values() const { return values_; }
  double total_measure() const { return ends_.empty() ? 0.0 : ends_.back(); }

  /// f*(t); f*(0) is the largest value.
  double operator()(double t) const;
  /// int_0^t f*(s) ds, exact on the step function.
  double integral_to(double t) const;
  /// int_0^{|Omega|} |f*|^p.
  double lp_integral(double p) const;

 private:
  std::vector<double> ends_;
  std::vector<double> values_;
};

/// |{f > s}| over physical nodes, measured by node measure.
double distribution(const GridField& f, double s);

/// Weighted descending sort of f over the nodes of positive measure; ties are
/// broken by storage offset.
RearrangementProfile decreasing_rearrangement(const GridField& f);

/// f**(t) = (1/t) int_0^t f*(s) ds. Throws std::invalid_argument for t <= 0.
double double_star(const RearrangementProfile& p, double t);

/// int_0^inf p*(s) q*(s) ds on the common refinement of two profiles,
/// optionally restricted to s >= from.
double product_integral(const RearrangementProfile& p, const RearrangementProfile& q,
                        double from = 0.0);

/// int_0^{|Omega|} |f|* |g|* - int |f g|; non-negative by Hardy-Littlewood.
double hardy_littlewood_slack(const GridField& f, const GridField& g);

struct ONeilReport {
  double u_star = 0.0;         // U*(t)
  double u_double_star = 0.0;  // U**(t)
  double bound = 0.0;          // t f**(t) G**(t) + int_t^inf f* G*
  double slack = 0.0;          // min(U** - U*, bound - U**)
  double scale = 0.0;          // max(|bound|, |U**|), for relative tolerances
};

/// O'Neil check for U = K * f on f's domain with a non-negative radial
/// kernel. G* is the upper envelope of the rearrangements of every row and
/// column of the discrete kernel matrix, which makes the bound exact for the
/// discrete convolution. Rejects t outside (0, |Omega|).
ONeilReport oneil_check(const GridField& f, const RadialKernel& kernel, double t);
double oneil_slack(const GridField& f, const RadialKernel& kernel, double t);

struct OneDReduction {
  std::vector<double> s;
  std::vector<double> phi;
  double integral_f2 = 0.0;
  double integral_phi2 = 0.0;
  double l2_defect = 0.0;
};

/// phi(s) = |Omega|^{1/2} f*(|Omega| e^{-s}) e^{-s/2} on a log grid with ten
/// samples per decade of measure up to s_max = ln(|Omega| / h^3). int phi^2
/// uses the trapezoid rule on the samples plus the exact tail beyond s_max.
/// Rejects negative field values.
OneDReduction one_d_reduction(const GridField& f, int samples_per_decade = 10);

/// Two-column CSV (measure,value) of the profile's step ends.
void write_profile_csv(std::ostream& out, const RearrangementProfile& p);

}  // namespace heisadams
