#include "heisadams/varsolve.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "heisadams/linalg.hpp"
#include "heisadams/operators.hpp"
#include "heisadams/quadrature.hpp"
#include "heisadams/summation.hpp"

namespace heisadams {

namespace {

void check_exponent(double a, const char* what) {
  if (!(a >= 0.0 && a < 4.0))
    throw std::invalid_argument(std::string(what) + ": a must lie in [0, 4)");
}

}  // namespace

double energy(const GridField& u, const NonlinearitySpec& nl, double a) {
  check_exponent(a, "energy");
  const auto& d = u.domain();
  const auto w = d.singular_weight(a);
  NeumaierSum potential;
  for (std::size_t o : d.unknowns()) {
    const double m = d.measure(o);
    if (m == 0.0) continue;
    potential.add(nl.big_f(d.coordinate_of(o), u[o]) * (*w)[o] * m);
  }
  return 0.5 * biharmonic_form(u, u) - potential.value();
}

GridField grad_energy(const GridField& u, const NonlinearitySpec& nl, double a) {
  check_exponent(a, "grad_energy");
  const auto& d = u.domain();
  const auto w = d.singular_weight(a);
  GridField g = bilaplacian(u);
  const double inv_cell = 1.0 / d.cell_volume();
  for (std::size_t o : d.unknowns())
    g[o] -= d.measure(o) * inv_cell * (*w)[o] * nl.f(d.coordinate_of(o), u[o]);
  g.apply_boundary();
  return g;
}

double dual_residual(const GridField& grad, double cg_tolerance, GridField* riesz) {
  GridField r = solve_bilaplacian(grad, cg_tolerance);
  const double v = grad.domain().cell_volume() * unknown_dot(grad, r);
  if (riesz) *riesz = std::move(r);
  return std::sqrt(std::max(0.0, v));
}

double rayleigh_quotient(const GridField& u, double a) {
  check_exponent(a, "rayleigh_quotient");
  GridField sq(u.domain_ptr());
  for (std::size_t o : u.domain().unknowns()) sq[o] = u[o] * u[o];
  const double den = integrate_weighted(sq, a);
  if (!(den > 0.0)) throw std::invalid_argument("rayleigh_quotient: u must be non-zero");
  return biharmonic_form(u, u) / den;
}

LambdaEstimate lambda_estimate(const DomainPtr& domain, double a, double tol,
                               std::size_t max_iterations) {
  check_exponent(a, "lambda_estimate");
  const auto& d = *domain;
  const auto w = d.singular_weight(a);
  GridField mass(domain);
  for (std::size_t o : d.unknowns()) mass[o] = (*w)[o] * d.measure(o) / d.cell_volume();
  auto apply_mass = [&](const GridField& v) {
    GridField r(domain);
    for (std::size_t o : d.unknowns()) r[o] = mass[o] * v[o];
    return r;
  };
  auto mass_norm = [&](const GridField& v) { return std::sqrt(unknown_dot(v, apply_mass(v))); };

  LambdaEstimate best;
  best.residual = std::numeric_limits<double>::infinity();
  GridField x(domain);
  for (std::size_t o : d.unknowns()) x[o] = 1.0;
  x *= 1.0 / mass_norm(x);

  for (std::size_t it = 1; it <= max_iterations; ++it) {
    GridField y = solve_bilaplacian(apply_mass(x), 1e-10);
    y *= 1.0 / mass_norm(y);
    const GridField ky = bilaplacian(y);
    const GridField my = apply_mass(y);
    const double lambda = unknown_dot(y, ky);  // y is mass-normalized
    // Relative residual in the mass-inverse norm.
    NeumaierSum res2;
    for (std::size_t o : d.unknowns()) {
      const double r = ky[o] - lambda * my[o];
      res2.add(r * r / mass[o]);
    }
    const double residual = std::sqrt(res2.value()) / lambda;
    if (residual < best.residual) {
      best.value = lambda;
      best.residual = residual;
      best.iterations = it;
      best.eigenvector = y;
    }
    x = std::move(y);
    if (residual <= tol) {
      best.converged = true;
      best.iterations = it;
      break;
    }
  }
  return best;
}

bool HypothesisReport::passed(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return !c.applicable || c.passed;
  throw std::invalid_argument("HypothesisReport: unknown check " + name);
}

bool HypothesisReport::all_passed(std::initializer_list<const char*> names) const {
  return std::all_of(names.begin(), names.end(), [&](const char* n) { return passed(n); });
}

HypothesisReport validate_hypotheses(const NonlinearitySpec& nl, double a, double lambda,
                                     const SamplePlan& plan) {
  check_exponent(a, "validate_hypotheses");
  if (plan.u_samples < 3 || !(plan.u_max > 0.0))
    throw std::invalid_argument("validate_hypotheses: sample plan needs u_max > 0 and >= 3 samples");
  std::vector<GaugePoint> points = plan.points;
  if (points.empty())
    points = {{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0.25}, {-0.7, 0.3, -0.6}, {1, 1, 1}};

  std::vector<double> us;
  for (std::size_t s = 0; s < plan.u_samples; ++s)
    us.push_back(-plan.u_max + 2.0 * plan.u_max * s / (plan.u_samples - 1));
  // Dense sampling near zero for H4.
  for (int s = 1; s <= 200; ++s) {
    us.push_back(plan.delta * s / 200.0);
    us.push_back(-plan.delta * s / 200.0);
  }

  auto range = [&](const char* what) {
    std::ostringstream os;
    os << what << " sampled on u in [-" << plan.u_max << ", " << plan.u_max << "] at "
       << points.size() << " points";
    return os.str();
  };

  HypothesisCheck prim, h1, h2, h3, h4, h5;
  prim.name = "primitive";
  h1.name = "H1";
  h2.name = "H2";
  h3.name = "H3";
  h4.name = "H4";
  h5.name = "H5";
  prim.detail = range("|F(u) - int_0^u f| / max(1,|F|)");
  h1.detail = range("sign violation of f");
  h2.detail = range("required M = max F/f over u >= r0");
  h3.detail = range("max theta F - u f over |u| >= r0");
  h4.detail = "max 2F/u^2 over 0 < |u| <= delta";
  double prim_worst = 0.0, h1_worst = 0.0, h2_needed = 0.0, h3_worst = -1e300, h4_worst = 0.0;
  bool h2_positive = true;

  for (const auto& p : points) {
    if (nl.big_f(p, 0.0) != 0.0) {
      prim.passed = false;
      prim.witness_point = p;
    }
    for (double u : us) {
      const double f = nl.f(p, u);
      const double big_f = nl.big_f(p, u);
      const double sign_violation = (u >= 0.0) ? std::max(0.0, -f) : std::max(0.0, f);
      if (sign_violation > h1_worst) {
        h1_worst = sign_violation;
        h1.witness_point = p;
        h1.witness_u = u;
      }
      if (u >= nl.r0) {
        if (!(big_f > 0.0)) {
          h2_positive = false;
          h2.witness_point = p;
          h2.witness_u = u;
        } else if (f > 0.0 && big_f / f > h2_needed) {
          h2_needed = big_f / f;
          h2.witness_point = p;
          h2.witness_u = u;
        } else if (!(f > 0.0)) {
          h2_positive = false;
        }
      }
      if (std::abs(u) >= nl.r0) {
        const double v = nl.theta * big_f - u * f;
        if (v > h3_worst) {
          h3_worst = v;
          h3.witness_point = p;
          h3.witness_u = u;
        }
      }
      if (u != 0.0 && std::abs(u) <= plan.delta) {
        const double r = 2.0 * big_f / (u * u);
        if (r > h4_worst) {
          h4_worst = r;
          h4.witness_point = p;
          h4.witness_u = u;
        }
      }
    }
    // Primitive cross-check at a few u values by adaptive quadrature.
    for (double u : {plan.u_max / 7.0, -plan.u_max / 5.0, plan.delta, plan.u_max / 3.0}) {
      auto integrand = [&](double s) { return nl.f(p, s); };
      const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          integrand, 0.0, u, 15, 1e-12);
      const double big_f = nl.big_f(p, u);
      const double err = std::abs(big_f - q) / std::max(1.0, std::abs(big_f));
      if (err > prim_worst) {
        prim_worst = err;
        prim.witness_point = p;
        prim.witness_u = u;
      }
    }
  }
  prim.worst = prim_worst;
  prim.passed = prim.passed && prim_worst <= 1e-8;
  h1.worst = h1_worst;
  h1.passed = h1_worst == 0.0;
  h2.worst = h2_needed;
  h2.passed = h2_positive && h2_needed <= nl.big_m && nl.big_m > 0.0 && nl.r0 > 0.0;
  h3.worst = h3_worst;
  h3.passed = nl.theta > 2.0 && nl.r0 > 0.0 && h3_worst <= 0.0;
  h4.worst = h4_worst;
  h4.passed = h4_worst < lambda;
  {
    std::ostringstream os;
    os << h4.detail << " = " << plan.delta << ", compared with Lambda = " << lambda;
    h4.detail = os.str();
  }

  h5.applicable = nl.growth == GrowthClass::Critical;
  if (h5.applicable) {
    const double threshold = (4.0 - a) * plan.big_a /
                             (4.0 * nl.alpha0 * std::pow(plan.adams_radius, 4.0 - a) * plan.m_estimate);
    // Sampled limit of u f exp(-alpha0 u^2) at the largest sampled u.
    double lim = 1e300;
    for (const auto& p : points) {
      const double u = plan.u_max;
      lim = std::min(lim, u * nl.f(p, u) * std::exp(-nl.alpha0 * u * u));
    }
    h5.worst = threshold;
    h5.witness_u = plan.u_max;
    h5.passed = plan.m_estimate > 0.0 && nl.beta1 > threshold && lim >= nl.beta1;
    std::ostringstream os;
    os << "beta1 = " << nl.beta1 << " vs (4-a)A/(4 alpha0 R^(4-a) M) = " << threshold
       << "; u f exp(-alpha0 u^2) at u = " << plan.u_max << " is " << lim;
    h5.detail = os.str();
  } else {
    h5.detail = "not applicable to subcritical growth";
  }

  HypothesisReport rep;
  rep.checks = {prim, h1, h2, h3, h4, h5};
  return rep;
}

double level_bound(double a, double alpha0, const SharpConstants& constants) {
  check_exponent(a, "level_bound");
  if (!(alpha0 > 0.0)) throw std::invalid_argument("level_bound: alpha0 must be positive");
  return (4.0 - a) * constants.big_a / (8.0 * alpha0);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::GeometryFailure: return "geometry-failure";
    case SolveStatus::Stagnation: return "stagnation";
    case SolveStatus::MaxIterations: return "max-iterations";
    case SolveStatus::Trivial: return "trivial";
  }
  return "unknown";
}

ContinuationResult critical_continuation(const NonlinearitySpec& nl, int nmax,
                                         const DomainPtr& domain, MountainPassOptions opts) {
  if (nmax < 2) throw std::invalid_argument("critical_continuation: nmax must be >= 2");
  ContinuationResult out;
  out.completed = true;
  for (int n = 1; n <= nmax; ++n) {
    const double a = continuation_exponent(n);
    if (!out.steps.empty()) opts.initial_direction = out.steps.back().u;
    MountainPassResult r = mountain_pass_solve(nl, a, domain, opts);

    ContinuationStep step;
    step.n = n;
    step.a = a;
    step.status = r.state.status;
    step.level = r.state.level_estimate;
    step.residual = r.state.grad_residual;
    step.norm = d022_norm(r.u);
    step.diff_norm = out.steps.empty() ? 0.0 : d022_norm(r.u - out.steps.back().u);
    GridField fu(domain), big_f(domain);
    const auto& d = *domain;
    for (std::size_t o : d.unknowns()) {
      const GaugePoint p = d.coordinate_of(o);
      fu[o] = nl.f(p, r.u[o]) * r.u[o];
      big_f[o] = nl.big_f(p, r.u[o]);
    }
    step.int_fu = integrate_weighted(fu, a);
    step.int_big_f = integrate_weighted(big_f, a);
    step.u = std::move(r.u);
    out.steps.push_back(std::move(step));
    if (!r.state.converged()) {
      out.completed = false;
      break;
    }
  }
  const auto& s = out.steps;
  if (out.completed && s.size() >= 4) {
    const std::size_t m = s.size();
    out.tail_decreasing =
        s[m - 1].diff_norm < s[m - 2].diff_norm && s[m - 2].diff_norm < s[m - 3].diff_norm;
  }
  return out;
}

}  // namespace heisadams
