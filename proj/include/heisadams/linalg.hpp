#pragma once

#include <cstddef>
#include <functional>

#include "heisadams/grid.hpp"

namespace heisadams {

using LinearOperator = std::function<GridField(const GridField&)>;

struct SolveReport {
  bool converged = false;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradient for a symmetric positive definite operator acting on
/// the unknown nodes (unknown_dot inner product). x holds the initial guess
/// and receives the solution.
SolveReport conjugate_gradient(const LinearOperator& op, const GridField& rhs, GridField& x,
                               double relative_tolerance, std::size_t max_iterations);

/// Solves bilaplacian(x) = rhs from a zero initial guess.
GridField solve_bilaplacian(const GridField& rhs, double relative_tolerance,
                            SolveReport* report = nullptr);

}  // namespace heisadams
