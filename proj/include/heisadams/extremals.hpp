#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "heisadams/grid.hpp"
#include "heisadams/linalg.hpp"

namespace heisadams {

/// Discrete conductor-capacity minimizer for (B_ell, B) on a Koranyi ball grid.
struct CapacityProfile {
  double ell = 0.0;
  GridField field;
  double energy = 0.0;  // ||Delta_H u||^2
  double bound = 0.0;   // A / (Q log(1/ell))
  double slack = 0.0;   // energy / bound - 1
  std::size_t rings = 0;
  SolveReport solve;
};

/// Nodes strictly inside B_ell along the positive x axis, origin excluded.
std::size_t resolved_rings(double ell, const GridDomain& ball);

/// Minimizes the discrete ||Delta_H u||^2 with u = 1 on nodes of gauge <= ell R
/// and u = 0 on and outside the boundary of the ball (two zero ghost layers).
/// `grid` must be a Koranyi ball of radius R. Throws when fewer than
/// `min_rings` rings resolve B_ell.
CapacityProfile capacity_profile(double ell, const DomainPtr& grid, std::size_t min_rings = 3,
                                 double cg_tolerance = 1e-10);

struct AdamsFunction {
  double r = 0.0;
  double big_r = 0.0;
  double plateau = 0.0;  // sqrt(Q log(R/r) / A)
  GridField field;
  double norm_estimate = 0.0;
  std::size_t rings = 0;  // rings resolving B_{r/R} on the reference unit ball
};

/// sqrt(Q log(R/r) / A).
double adams_amplitude(double r, double big_r);

/// Trilinear interpolation of a unit-ball field at an arbitrary point (zero
/// outside the grid box).
double interpolate(const GridField& u, const GaugePoint& p);

/// plateau * U_{r/R}(delta_{1/R} xi) on the nodes of `grid` with gauge < R,
/// where U is the capacity profile on the unit ball with the same node count
/// as the first axis of `grid`.
AdamsFunction adams_function(double r, double big_r, const DomainPtr& grid,
                             std::size_t min_rings = 3);

enum class MReading {
  Squared,  // exp(Q log k U^2)
  Linear,   // exp(Q log k |U|)
};

struct MEstimate {
  std::size_t n = 0;  // grid nodes per axis
  int k = 0;
  double value = 0.0;
};

/// Measure of the part of node o's cell (within the ball) with gauge >= inner.
double annulus_measure(const GridDomain& ball, std::size_t offset, double inner);

/// int_{1/k <= rho <= 1} exp(Q log k g(U_{1/k})) over the unit ball for every
/// k in 2..kmax and every grid of the ladder. `profile_override` replaces U
/// (used for degenerate-profile checks).
std::vector<MEstimate> m_constant(int kmax, const std::vector<std::size_t>& ladder,
                                  MReading reading = MReading::Squared,
                                  const std::optional<double>& profile_override = std::nullopt);

/// int exp(beta u^2) / rho^a over the domain of u.
double singular_mt_functional(const GridField& u, double beta, double a);

struct SharpnessRow {
  int k = 0;
  double beta = 0.0;
  double a = 0.0;
  double value = 0.0;
  double norm_estimate = 0.0;
};

struct SharpnessTable {
  std::vector<SharpnessRow> rows;  // k-major, betas in the given order
  std::size_t n = 0;
  double big_r = 1.0;
  /// Largest norm estimate among the Adams functions used.
  double max_norm = 0.0;

  /// Values for one beta across k in row order.
  std::vector<double> column(double beta) const;
};

/// Values of the singular functional on Adams functions A_{R/k} over the
/// ball of radius R on an n^3 grid.
SharpnessTable sharpness_probe(double a, const std::vector<double>& betas,
                               const std::vector<int>& ks, std::size_t n = 33,
                               double big_r = 1.0);

void write_sharpness_csv(std::ostream& os, const SharpnessTable& table);

}  // namespace heisadams
