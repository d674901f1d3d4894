#include "heisadams/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "heisadams/summation.hpp"

namespace heisadams {

double integrate_weighted(const GridField& f, double a) {
  const auto& d = f.domain();
  const auto w = d.singular_weight(a);  // validates a
  NeumaierSum s;
  for (std::size_t o : d.physical_nodes()) {
    const double m = d.measure(o);
    if (m != 0.0) s.add(f[o] * (*w)[o] * m);
  }
  return s.value();
}

double kernel_entry(const RadialKernel& kernel, const GaugePoint& xi, const GaugePoint& eta,
                    const std::array<double, 3>& h) {
  const double r = gauge(group_mul(xi, inverse(eta)));
  if (r > 0.0) return kernel(r);
  double sum = 0.0;
  for (int c = 0; c < 8; ++c) {
    // Offsets act on the left so the entry is the same at every node.
    const GaugePoint d{((c & 1) ? 0.25 : -0.25) * h[0], ((c & 2) ? 0.25 : -0.25) * h[1],
                       ((c & 4) ? 0.25 : -0.25) * h[2]};
    sum += kernel(gauge(group_mul(xi, inverse(group_mul(d, eta)))));
  }
  return sum / 8.0;
}

namespace {

struct SourceNode {
  GaugePoint p;
  double weight;  // f * mu
};

}  // namespace

GridField group_convolve(const GridField& f, const RadialKernel& kernel, DomainPtr target) {
  const auto& src = f.domain();
  std::vector<SourceNode> sources;
  for (std::size_t o : src.physical_nodes()) {
    const double m = src.measure(o);
    if (m == 0.0) continue;
    sources.push_back({src.coordinate_of(o), f[o] * m});
  }
  GridField out(target);
  const auto& t = *target;
  const auto tn = t.dims();
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(tn[2]); ++k)
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(tn[1]); ++j)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(tn[0]); ++i) {
        const GaugePoint xi = t.coordinate(i, j, k);
        NeumaierSum s;
        for (const auto& sn : sources) {
          if (sn.weight == 0.0) continue;
          s.add(kernel_entry(kernel, xi, sn.p, src.spacing()) * sn.weight);
        }
        out.at(i, j, k) = s.value();
      }
  return out;
}

GridField riesz_convolve(const GridField& f, double alpha, DomainPtr target) {
  if (!(alpha > 0.0 && alpha < 4.0))
    throw std::invalid_argument("riesz_convolve: alpha must lie in (0, 4)");
  const double e = alpha - 4.0;
  return group_convolve(f, [e](double r) { return std::pow(r, e); }, std::move(target));
}

ConvolutionMatrix convolution_matrix(const GridDomain& source, const GridDomain& target,
                                     const RadialKernel& kernel) {
  ConvolutionMatrix m;
  auto coords = [](const GridDomain& d, std::size_t o) { return d.coordinate_of(o); };
  for (std::size_t o : source.physical_nodes())
    if (source.measure(o) != 0.0) m.col_offsets.push_back(o);
  for (std::size_t o : target.physical_nodes())
    if (target.measure(o) != 0.0) m.row_offsets.push_back(o);
  m.rows = m.row_offsets.size();
  m.cols = m.col_offsets.size();
  m.entries.resize(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const GaugePoint xi = coords(target, m.row_offsets[r]);
    for (std::size_t c = 0; c < m.cols; ++c)
      m.entries[r * m.cols + c] =
          kernel_entry(kernel, xi, coords(source, m.col_offsets[c]), source.spacing());
  }
  return m;
}

}  // namespace heisadams
