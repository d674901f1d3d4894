#pragma once

#include <functional>
#include <vector>

#include "heisadams/grid.hpp"

namespace heisadams {

/// sum f(xi) w_a(xi) mu(xi) over physical nodes, w_a the regularized rho^{-a}.
/// Rejects a < 0, and a >= 4 when the domain contains the origin.
double integrate_weighted(const GridField& f, double a);

/// Radial kernel as a function of the Koranyi gauge of xi * eta^{-1}.
using RadialKernel = std::function<double(double)>;

/// Kernel entry K(xi * eta^{-1}) for target node xi and source node eta.
/// Coincident nodes use the average of the kernel over the 8 subsamples
/// d * eta of the source cell, d = (+-h/4, +-h/4, +-h_t/4).
double kernel_entry(const RadialKernel& kernel, const GaugePoint& xi, const GaugePoint& eta,
                    const std::array<double, 3>& source_spacing);

/// Discrete group convolution sum_eta K(xi eta^{-1}) f(eta) mu(eta) at every
/// physical node of `target`.
GridField group_convolve(const GridField& f, const RadialKernel& kernel, DomainPtr target);

/// Riesz potential I_alpha * f with kernel |xi eta^{-1}|^{alpha-4}; alpha in (0, 4).
GridField riesz_convolve(const GridField& f, double alpha, DomainPtr target);

/// Dense kernel matrix K[t * ns + s] between target and source physical nodes
/// (source columns restricted to nodes of positive measure, in physical order).
struct ConvolutionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> col_offsets;
  std::vector<double> entries;
};
ConvolutionMatrix convolution_matrix(const GridDomain& source, const GridDomain& target,
                                     const RadialKernel& kernel);

}  // namespace heisadams
