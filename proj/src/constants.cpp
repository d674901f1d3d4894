#include "heisadams/constants.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heisadams/heisenberg.hpp"
#include "heisadams/summation.hpp"
#include "json.hpp"

namespace heisadams {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Integral kronrod(F&& f, double lo, double hi, const QuadratureOptions& opt) {
  double err = 0.0;
  const double v = gauss_kronrod<double, 31>::integrate(f, lo, hi, opt.max_depth,
                                                        opt.relative_tolerance, &err);
  return {v, err};
}

// |B(0,1)| = int_{|z|<=1} 2 sqrt(1-|z|^4) dz; |z|^2 = sin(theta) removes the endpoint root.
Integral unit_ball_volume(const QuadratureOptions& opt) {
  auto f = [](double theta) {
    const double c = std::cos(theta);
    return 2.0 * kPi * c * c;
  };
  return kronrod(f, 0.0, kPi / 2.0, opt);
}

// 2 * int_{rho <= R} |z|^2 (|z|^4 + t^2 + 1)^{-5/2} dxi as iterated (r, t) integrals.
Integral gamma1_integral(const QuadratureOptions& opt) {
  const double big_r4 = std::pow(opt.gauge_cutoff, 4);
  double inner_error = 0.0;
  auto outer = [&](double r) {
    const double r4 = r * r * r * r;
    const double tmax = std::sqrt(std::max(0.0, big_r4 - r4));
    auto inner = [r4](double t) { return std::pow(r4 + t * t + 1.0, -2.5); };
    const Integral in = kronrod(inner, 0.0, tmax, opt);
    const double weight = 2.0 * 2.0 * kPi * r * r * r;  // symmetric t, 2 pi r |z|^2
    inner_error = std::max(inner_error, std::abs(weight * in.error));
    return 2.0 * weight * in.value;
  };
  Integral out = kronrod(outer, 0.0, opt.gauge_cutoff, opt);
  out.error += 2.0 * inner_error * opt.gauge_cutoff;
  return out;
}

}  // namespace

SharpConstants compute_constants(const QuadratureOptions& options) {
  if (!(options.gauge_cutoff > 1.0)) throw std::invalid_argument("gauge_cutoff must exceed 1");
  SharpConstants c;
  c.q = kHomogeneousDimension;

  const Integral vol = unit_ball_volume(options);
  c.unit_ball_volume = vol.value;
  c.c0 = c.q * vol.value;
  c.w3 = c.c0;

  const Integral g = gamma1_integral(options);
  // rho^{-8} radial decay of the integrand; polar measure c0 rho^3 d rho.
  const double tail = c.c0 * std::pow(options.gauge_cutoff, -4) / 2.0;
  c.gamma1 = 1.0 / g.value;
  c.big_a = c.q / (c.c0 * c.gamma1 * c.gamma1);

  c.errors.unit_ball_volume = vol.error;
  c.errors.c0 = c.q * vol.error;
  c.errors.gamma1_tail_bound = tail;
  const double g_rel = (g.error + tail) / g.value;
  c.errors.gamma1 = c.gamma1 * g_rel;
  c.errors.big_a = c.big_a * (vol.error / vol.value + 2.0 * g_rel);

  const double worst = std::max({c.errors.unit_ball_volume / c.unit_ball_volume,
                                 c.errors.gamma1 / c.gamma1, c.errors.big_a / c.big_a});
  c.converged = std::isfinite(worst) && worst <= options.requested_relative_error;
  return c;
}

SharpConstants closed_form_constants() {
  SharpConstants c;
  c.q = kHomogeneousDimension;
  c.unit_ball_volume = kPi * kPi / 2.0;
  c.c0 = 2.0 * kPi * kPi;
  c.w3 = c.c0;
  c.gamma1 = 3.0 / (4.0 * kPi);
  c.big_a = 32.0 / 9.0;
  c.converged = true;
  return c;
}

MonteCarloConstants monte_carlo_constants(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("monte_carlo_constants: need at least 2 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double n = static_cast<double>(samples);

  MonteCarloConstants out;
  {
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const GaugePoint p{2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
      if (gauge(p) <= 1.0) ++hits;
    }
    const double frac = hits / n;
    out.unit_ball_volume = {8.0 * frac, 8.0 * std::sqrt(frac * (1.0 - frac) / n)};
  }
  {
    // r = tan(pi u / 2) on (0, inf), t = tan(pi (v - 1/2)) on R.
    NeumaierSum sum, sum_sq;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const double u = unit(rng);
      const double v = unit(rng);
      const double r = std::tan(0.5 * kPi * u);
      const double t = std::tan(kPi * (v - 0.5));
      const double jac = 0.5 * kPi * (1.0 + r * r) * kPi * (1.0 + t * t);
      const double r4 = r * r * r * r;
      double g = 2.0 * 2.0 * kPi * r * r * r * std::pow(r4 + t * t + 1.0, -2.5) * jac;
      if (!std::isfinite(g)) g = 0.0;
      sum.add(g);
      sum_sq.add(g * g);
    }
    const double mean = sum.value() / n;
    const double var = std::max(0.0, sum_sq.value() / n - mean * mean);
    out.gamma1_integral = {mean, std::sqrt(var / n)};
    out.gamma1 = {1.0 / mean, out.gamma1_integral.std_error / (mean * mean)};
  }
  return out;
}

double gamma_n(int n, double relative_tolerance) {
  if (n < 1) throw std::invalid_argument("gamma_n: n must be >= 1");
  const double s = (n + 4) / 2.0;
  const double sphere = 2.0 * std::pow(kPi, n) / std::tgamma(n);  // |S^{2n-1}|
  auto outer = [&](double r) {
    const double r4 = r * r * r * r;
    auto inner = [&](double t) { return std::pow(r4 + t * t + 1.0, -s); };
    const double in = 2.0 * gauss_kronrod<double, 31>::integrate(
                                inner, 0.0, std::numeric_limits<double>::infinity(), 15,
                                relative_tolerance);
    return sphere * std::pow(r, 2 * n - 1) * r * r * in;
  };
  const double integral = gauss_kronrod<double, 31>::integrate(
      outer, 0.0, std::numeric_limits<double>::infinity(), 15, relative_tolerance);
  return 1.0 / (n * (n + 1) * integral);
}

std::string constants_to_json(const SharpConstants& c) {
  nlohmann::ordered_json j;
  j["q"] = c.q;
  j["c0"] = c.c0;
  j["gamma1"] = c.gamma1;
  j["bigA"] = c.big_a;
  j["unitBallVolume"] = c.unit_ball_volume;
  j["w3"] = c.w3;
  j["converged"] = c.converged;
  j["errorEstimates"] = {{"unitBallVolume", c.errors.unit_ball_volume},
                         {"c0", c.errors.c0},
                         {"gamma1", c.errors.gamma1},
                         {"bigA", c.errors.big_a},
                         {"gamma1TailBound", c.errors.gamma1_tail_bound}};
  return j.dump(2);
}

}  // namespace heisadams
