// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "heisadams/grid.hpp"
#include "heisadams/operators.hpp"

namespace oracle {

using namespace heisadams;

/// Smallest generalized eigenvalue of the assembled (bilaplacian, w mu / h^3)
/// pencil by a dense symmetric eigensolve.
inline double dense_lambda(const DomainPtr& domain, double a) {
  const auto& d = *domain;
  const auto& unk = d.unknowns();
  const auto n = static_cast<Eigen::Index>(unk.size());
  Eigen::MatrixXd k(n, n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const auto w = d.singular_weight(a);
  for (Eigen::Index c = 0; c < n; ++c) {
    GridField e(domain);
    e[unk[c]] = 1.0;
    const GridField col = bilaplacian(e);
    for (Eigen::Index r = 0; r < n; ++r) k(r, c) = col[unk[r]];
    m(c, c) = (*w)[unk[c]] * d.measure(unk[c]) / d.cell_volume();
  }
  const Eigen::MatrixXd ks = 0.5 * (k + k.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ks, m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Random field on the unknowns, boundary policy applied.
inline GridField random_field(const DomainPtr& domain, std::mt19937_64& rng, double lo = -1.0,
                              double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  GridField f(domain);
  for (std::size_t o : domain->unknowns()) f[o] = u(rng);
  f.apply_boundary();
  return f;
}

/// Random values on every physical node.
inline GridField random_physical(const DomainPtr& domain, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  GridField f(domain);
  for (std::size_t o : domain->physical_nodes()) f[o] = u(rng);
  return f;
}

/// Integral of rho^{-a} over the origin-centred cell [-hx/2,hx/2]x[-hy/2,hy/2]x[-ht/2,ht/2].
/// With t = s^2 the integrand is homogeneous of degree 1 - a in (x, y, s), so
/// the radial integral is exact and only the two angles are integrated,
/// piecewise between the angles where the exit face changes.
inline double origin_cell_integral(double a, double hx, double hy, double ht) {
  using boost::math::quadrature::gauss_kronrod;
  const double half_pi = std::acos(-1.0) / 2;
  const double x = hx / 2, y = hy / 2, s = std::sqrt(ht / 2);
  auto piecewise = [](const auto& f, std::vector<double> cuts, double lo, double hi) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i] >= lo && cuts[i + 1] <= hi && cuts[i + 1] > cuts[i])
        sum += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], 8, 1e-13);
    return sum;
  };
  auto inner = [&](double theta) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double g = std::pow(std::pow(st, 4) + std::pow(ct, 4), -a / 4) * 2 * ct * st;
    auto f = [&](double phi) {
      double rmax = s / ct;
      if (st > 0) rmax = std::min({rmax, x / (st * std::cos(phi)), y / (st * std::sin(phi))});
      return g * std::pow(rmax, 4 - a) / (4 - a);
    };
    std::vector<double> cuts{std::atan2(y, x)};
    if (st > 0) {
      cuts.push_back(std::acos(std::min(1.0, x * ct / (s * st))));
      cuts.push_back(std::asin(std::min(1.0, y * ct / (s * st))));
    }
    return piecewise(f, cuts, 0.0, half_pi);
  };
  const std::vector<double> theta_cuts{std::atan(x / s), std::atan(y / s), std::atan(std::hypot(x, y) / s)};
  return 8 * piecewise(inner, theta_cuts, 0.0, half_pi);
}

/// Observed convergence order from errors on successively halved grids.
inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace oracle
