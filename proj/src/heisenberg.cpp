#include "heisadams/heisenberg.hpp"

#include <stdexcept>

namespace heisadams {

GaugePoint group_mul(const GaugePoint& p, const GaugePoint& q) {
  return {p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * (p.y * q.x - p.x * q.y)};
}

GaugePoint inverse(const GaugePoint& p) { return {-p.x, -p.y, -p.t}; }

double gauge(const GaugePoint& p) {
  const double z2 = p.x * p.x + p.y * p.y;
  // sqrt(sqrt(.)) keeps the exact value on perfect fourth powers.
  return std::sqrt(std::sqrt(z2 * z2 + p.t * p.t));
}

GaugePoint dilate(double lambda, const GaugePoint& p) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  return {lambda * p.x, lambda * p.y, lambda * lambda * p.t};
}

}  // namespace heisadams
