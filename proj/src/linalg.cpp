#include "heisadams/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "heisadams/operators.hpp"

namespace heisadams {

SolveReport conjugate_gradient(const LinearOperator& op, const GridField& rhs, GridField& x,
                               double relative_tolerance, std::size_t max_iterations) {
  SolveReport rep;
  const double bnorm = std::sqrt(unknown_dot(rhs, rhs));
  if (bnorm == 0.0) {
    x = GridField(rhs.domain_ptr());
    rep.converged = true;
    return rep;
  }
  GridField r = rhs - op(x);
  GridField p = r;
  double rr = unknown_dot(r, r);
  for (rep.iterations = 0; rep.iterations < max_iterations; ++rep.iterations) {
    rep.relative_residual = std::sqrt(rr) / bnorm;
    if (rep.relative_residual <= relative_tolerance) {
      rep.converged = true;
      break;
    }
    const GridField ap = op(p);
    const double pap = unknown_dot(p, ap);
    if (!(pap > 0.0)) break;  // operator not positive definite on p
    const double alpha = rr / pap;
    x.axpy(alpha, p);
    r.axpy(-alpha, ap);
    const double rr_new = unknown_dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    p *= beta;
    p += r;
  }
  rep.relative_residual = std::sqrt(rr) / bnorm;
  if (rep.relative_residual <= relative_tolerance) rep.converged = true;
  x.apply_boundary();
  return rep;
}

GridField solve_bilaplacian(const GridField& rhs, double relative_tolerance, SolveReport* report) {
  GridField x(rhs.domain_ptr());
  const std::size_t cap = 20 * rhs.domain().unknowns().size() + 100;
  const SolveReport rep =
      conjugate_gradient([](const GridField& v) { return bilaplacian(v); }, rhs, x,
                         relative_tolerance, cap);
  if (report) *report = rep;
  return x;
}

}  // namespace heisadams
