#pragma once

#include "heisadams/grid.hpp"

namespace heisadams {

struct HorizontalFields {
  GridField x;  // X u = u_x + 2y u_t
  GridField y;  // Y u = u_y - 2x u_t
  GridField t;  // T u = u_t
};

/// Centered first differences of the left-invariant fields at every physical
/// node. Reads one ghost layer of u as stored.
HorizontalFields apply_fields(const GridField& u);

/// Discrete sublaplacian u_xx + u_yy + 4(x^2+y^2) u_tt + 4y u_xt - 4x u_yt at
/// every physical node; mixed terms use 4-point centered stencils. Reads one
/// ghost layer of u as stored (no boundary refresh).
GridField sublaplacian(const GridField& u);

/// Representer of the discrete biharmonic form: for unknown-supported v,
/// sum_unknowns bilaplacian(u) v h^3 = <L u, L v>_energy exactly. The
/// boundary policy is applied to u before the first application and the
/// second application is the transpose of the first.
GridField bilaplacian(const GridField& u);

/// <L u, L v> weighted by the energy weights, after boundary refresh.
double biharmonic_form(const GridField& u, const GridField& v);

/// Discrete D^{2,2}_0 norm (sum (L u)^2 * weight)^{1/2} after boundary refresh.
double d022_norm(const GridField& u);

}  // namespace heisadams
