#pragma once

#include <cstdint>
#include <string>

namespace heisadams {

struct QuadratureOptions {
  /// Gauge radius at which the improper gamma_1 integral is truncated.
  double gauge_cutoff = 50.0;
  /// Relative tolerance handed to each adaptive 1-D Gauss-Kronrod pass.
  double relative_tolerance = 1e-11;
  unsigned max_depth = 18;
  /// Combined relative error above which the result is flagged as not converged.
  double requested_relative_error = 1e-6;
};

struct ConstantErrors {
  double unit_ball_volume = 0.0;
  double c0 = 0.0;
  double gamma1 = 0.0;
  double big_a = 0.0;
  /// Analytic bound on the part of the gamma_1 integral beyond gauge_cutoff.
  double gamma1_tail_bound = 0.0;
};

/// Sharp constants of the second-order Adams inequality on H^1.
struct SharpConstants {
  int q = 4;
  double c0 = 0.0;
  double gamma1 = 0.0;
  double big_a = 0.0;
  double w3 = 0.0;  // the polar-formula constant, identified with c0
  double unit_ball_volume = 0.0;
  ConstantErrors errors;
  bool converged = false;

  /// Threshold exponent A(1 - a/4) of the singular inequality.
  double singular_exponent(double a) const { return big_a * (1.0 - a / q); }
};

SharpConstants compute_constants(const QuadratureOptions& options = {});

/// Closed-form values: V = pi^2/2, c0 = 2 pi^2, gamma1 = 3/(4 pi), A = 32/9.
SharpConstants closed_form_constants();

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct MonteCarloConstants {
  MonteCarloEstimate unit_ball_volume;
  MonteCarloEstimate gamma1_integral;  // 2 * int |z|^2 (|z|^4+t^2+1)^{-5/2}
  MonteCarloEstimate gamma1;           // delta-method propagated
};

/// Independent plain Monte-Carlo estimates, used as a cross-check of the
/// iterated quadrature. Deterministic for a given seed.
MonteCarloConstants monte_carlo_constants(std::uint64_t samples, std::uint64_t seed);

/// Fundamental-solution constant gamma_n on H^n (documentation only; solvers
/// use n = 1).
double gamma_n(int n, double relative_tolerance = 1e-10);

/// JSON document {q, c0, gamma1, bigA, unitBallVolume, errorEstimates}.
std::string constants_to_json(const SharpConstants& constants);

}  // namespace heisadams
