#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heisadams/constants.hpp"
#include "heisadams/grid.hpp"
#include "heisadams/nonlinearity.hpp"

namespace heisadams {

/// J(u) = 1/2 ||u||^2 - int F(xi, u) / rho^a, 0 <= a < 4.
double energy(const GridField& u, const NonlinearitySpec& nl, double a);

/// Cellwise representer bilaplacian(u) - (mu / h^3) w_a f(xi, u): for any
/// unknown-supported v, h^3 * unknown_dot(grad, v) is the directional
/// derivative of energy at u along v.
GridField grad_energy(const GridField& u, const NonlinearitySpec& nl, double a);

/// Dual D^{2,2} norm of the derivative functional represented by `grad`,
/// sqrt(h^3 <grad, bilaplacian^{-1} grad>). `riesz` receives the Sobolev
/// gradient bilaplacian^{-1} grad when non-null.
double dual_residual(const GridField& grad, double cg_tolerance, GridField* riesz = nullptr);

/// ||u||^2 / int u^2 / rho^a. Throws for u == 0.
double rayleigh_quotient(const GridField& u, double a);

struct LambdaEstimate {
  double value = 0.0;
  double residual = 0.0;  // relative generalized eigen-residual
  std::size_t iterations = 0;
  bool converged = false;
  GridField eigenvector;
};

/// Smallest generalized eigenvalue of (bilaplacian, w_a mu / h^3) by inverse
/// power iteration with CG inner solves (relative tolerance 1e-10).
LambdaEstimate lambda_estimate(const DomainPtr& domain, double a, double tol,
                               std::size_t max_iterations = 500);

struct SamplePlan {
  double u_max = 10.0;
  std::size_t u_samples = 2001;
  /// H4 is checked on 0 < |u| <= delta.
  double delta = 1e-2;
  /// Gauge points at which f is sampled (defaults to the origin and a few
  /// points of the unit box when empty).
  std::vector<GaugePoint> points;
  /// Adams radius R and the estimate of the constant M used by H5.
  double adams_radius = 1.0;
  double m_estimate = 0.0;
  double big_a = 32.0 / 9.0;
};

struct HypothesisCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double worst = 0.0;  // the witness quantity, see detail
  GaugePoint witness_point;
  double witness_u = 0.0;
  std::string detail;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;  // primitive, H1..H5 in order
  bool passed(const std::string& name) const;
  /// All applicable checks among the named ones pass.
  bool all_passed(std::initializer_list<const char*> names) const;
};

/// Sampled validation of the structural hypotheses. Limits are only checked
/// on the sampled range, which each check's detail string states.
HypothesisReport validate_hypotheses(const NonlinearitySpec& nl, double a, double lambda,
                                     const SamplePlan& plan = {});

/// (4 - a) A / (8 alpha0). Throws for alpha0 <= 0 or a outside [0, 4).
double level_bound(double a, double alpha0, const SharpConstants& constants);

enum class SolveStatus { Converged, GeometryFailure, Stagnation, MaxIterations, Trivial };
const char* to_string(SolveStatus s);

struct MountainPassOptions {
  std::size_t path_points = 32;
  double tol = 1e-6;
  double armijo = 1e-4;
  double initial_step = 1.0;
  double triviality_floor = 1e-6;
  std::size_t max_iterations = 5000;
  double t_max = 1e8;
  double cg_tolerance = 1e-10;
  /// Direction along which the endpoint e = t u0 is sought; a clamped bump
  /// when empty.
  std::optional<GridField> initial_direction;
};

struct TraceRow {
  std::size_t iteration = 0;
  double level = 0.0;
  double residual = 0.0;
  double norm = 0.0;
};

struct MountainPassState {
  std::vector<GridField> path_points;
  double level_estimate = 0.0;
  std::size_t maximizer_index = 0;
  double grad_residual = 0.0;
  double endpoint_energy = 0.0;
  std::vector<TraceRow> history;
  SolveStatus status = SolveStatus::MaxIterations;
  bool converged() const { return status == SolveStatus::Converged; }
};

struct MountainPassResult {
  GridField u;
  MountainPassState state;
};

/// Mountain-pass path deformation with Sobolev-gradient descent of the path
/// maximizer (see README for the algorithm). The domain is taken from the
/// initial direction when given, otherwise from `domain`.
MountainPassResult mountain_pass_solve(const NonlinearitySpec& nl, double a, const DomainPtr& domain,
                                       const MountainPassOptions& opts = {});

/// Default clamped positive bump on the domain's unknowns.
GridField default_bump(const DomainPtr& domain);

struct ContinuationStep {
  int n = 0;
  double a = 0.0;
  GridField u;
  double norm = 0.0;
  double diff_norm = 0.0;  // ||u_n - u_{n-1}||, 0 for n = 1
  double int_fu = 0.0;     // int f(xi,u) u / rho^a
  double int_big_f = 0.0;  // int F(xi,u) / rho^a
  double level = 0.0;
  double residual = 0.0;
  SolveStatus status = SolveStatus::MaxIterations;
};

struct ContinuationResult {
  std::vector<ContinuationStep> steps;
  bool completed = false;       // every inner solve converged
  bool tail_decreasing = false;  // last three diff norms strictly decreasing
};

/// a_n = 4 - 1/n for n = 1..nmax, each solve warm-started from u_{n-1}.
/// Stops at the first non-converged inner solve.
ContinuationResult critical_continuation(const NonlinearitySpec& nl, int nmax,
                                         const DomainPtr& domain, MountainPassOptions opts = {});

inline double continuation_exponent(int n) { return 4.0 - 1.0 / n; }

}  // namespace heisadams
