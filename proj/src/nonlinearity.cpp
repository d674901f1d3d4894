#include "heisadams/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace heisadams {

NonlinearitySpec cubic_nonlinearity(double r0, double big_m) {
  NonlinearitySpec nl;
  nl.name = "cubic";
  nl.f = [](const GaugePoint&, double u) { return u * u * u; };
  nl.big_f = [](const GaugePoint&, double u) { return 0.25 * u * u * u * u; };
  nl.growth = GrowthClass::Subcritical;
  nl.theta = 4.0;
  nl.r0 = r0;
  nl.big_m = big_m;  // F/f = u/4, so F <= M f holds for r0 <= u <= 4M only
  return nl;
}

NonlinearitySpec critical_nonlinearity(double lambda, double alpha0, double theta, double beta1) {
  if (!(alpha0 > 0.0)) throw std::invalid_argument("critical_nonlinearity: alpha0 must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("critical_nonlinearity: lambda must be positive");
  if (!(theta > 2.0)) throw std::invalid_argument("critical_nonlinearity: theta must exceed 2");
  NonlinearitySpec nl;
  nl.name = "critical";
  nl.f = [lambda, alpha0](const GaugePoint&, double u) {
    return lambda * u * std::exp(alpha0 * u * u);
  };
  nl.big_f = [lambda, alpha0](const GaugePoint&, double u) {
    return lambda * std::expm1(alpha0 * u * u) / (2.0 * alpha0);
  };
  nl.growth = GrowthClass::Critical;
  nl.alpha0 = alpha0;
  nl.theta = theta;
  nl.r0 = std::sqrt(theta / (2.0 * alpha0));
  nl.big_m = 1.0 / (2.0 * alpha0 * nl.r0);
  nl.beta1 = beta1;
  return nl;
}

NonlinearitySpec zero_nonlinearity() {
  NonlinearitySpec nl;
  nl.name = "zero";
  nl.f = [](const GaugePoint&, double) { return 0.0; };
  nl.big_f = [](const GaugePoint&, double) { return 0.0; };
  nl.theta = 4.0;
  nl.big_m = 1.0;
  nl.r0 = 1.0;
  return nl;
}

}  // namespace heisadams
