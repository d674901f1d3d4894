#pragma once

#include <functional>
#include <string>

#include "heisadams/heisenberg.hpp"

namespace heisadams {

enum class GrowthClass { Subcritical, Critical };

/// Nonlinearity f(xi, u) with primitive F(xi, u) = int_0^u f(xi, s) ds and
/// the parameters of the structural hypotheses.
struct NonlinearitySpec {
  std::string name;
  std::function<double(const GaugePoint&, double)> f;
  std::function<double(const GaugePoint&, double)> big_f;
  GrowthClass growth = GrowthClass::Subcritical;
  double alpha0 = 0.0;  // critical exponent (critical class only)
  double theta = 0.0;   // superlinearity constant, > 2
  double big_m = 0.0;   // F <= M f for u >= r0
  double r0 = 0.0;
  double beta1 = 0.0;   // lower bound of lim u f exp(-alpha0 u^2) (critical only)
};

/// f(u) = u^3, F = u^4 / 4, theta = 4. F/f = u/4 is unbounded, so the
/// default M = 25 covers sampled ranges up to |u| = 100.
NonlinearitySpec cubic_nonlinearity(double r0 = 1.0, double big_m = 25.0);

/// f(u) = lambda u exp(alpha0 u^2), F = lambda (exp(alpha0 u^2) - 1) / (2 alpha0).
/// r0 defaults to sqrt(theta / (2 alpha0)) so that theta F <= u f holds for u >= r0,
/// and M = 1 / (2 alpha0 r0).
NonlinearitySpec critical_nonlinearity(double lambda, double alpha0, double theta = 4.0,
                                       double beta1 = 1.0);

/// Zero nonlinearity (pure quadratic energy).
NonlinearitySpec zero_nonlinearity();

}  // namespace heisadams
