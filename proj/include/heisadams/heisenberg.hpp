#pragma once

#include <cmath>

namespace heisadams {

/// Homogeneous dimension of the first Heisenberg group.
inline constexpr int kHomogeneousDimension = 4;

/// A point (x, y, t) of the first Heisenberg group.
struct GaugePoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;

  friend bool operator==(const GaugePoint&, const GaugePoint&) = default;
};

/// Group law (x,y,t)(x',y',t') = (x+x', y+y', t+t'+2(yx'-xy')).
GaugePoint group_mul(const GaugePoint& p, const GaugePoint& q);

GaugePoint inverse(const GaugePoint& p);

/// Koranyi gauge ((x^2+y^2)^2 + t^2)^{1/4}.
double gauge(const GaugePoint& p);

/// Parabolic dilation (lambda x, lambda y, lambda^2 t). Throws
/// std::invalid_argument for lambda <= 0.
GaugePoint dilate(double lambda, const GaugePoint& p);

}  // namespace heisadams
