#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "heisadams/heisenberg.hpp"

namespace heisadams {

/// How ghost and exterior node values are derived from the unknowns.
enum class BoundaryPolicy {
  /// Box: u = 0 on the boundary ring, ghosts are even reflections of the
  /// interior (centered normal difference vanishes).
  ClampedReflect,
  /// Masked subdomain: everything outside the unknown mask is zero.
  ZeroExtension,
};

struct NodeIndex {
  std::ptrdiff_t i = 0, j = 0, k = 0;
};

class GridDomain;
using DomainPtr = std::shared_ptr<const GridDomain>;

/// Axis-aligned node grid on [-Lx,Lx]x[-Ly,Ly]x[-Lt,Lt] with two ghost layers.
///
/// Physical nodes carry indices 0..n-1 per axis; storage covers -2..n+1.
/// Every physical node has a quadrature measure (its cell volume clipped to
/// the region) and an energy weight used by the discrete D^{2,2} norm.
class GridDomain {
 public:
  static constexpr std::ptrdiff_t kGhost = 2;

  /// Clamped box. Each n must be >= 3.
  static DomainPtr box(std::array<std::size_t, 3> n, std::array<double, 3> half_extent);
  static DomainPtr box(std::size_t n, double half_extent = 1.0) {
    return box({n, n, n}, {half_extent, half_extent, half_extent});
  }
  /// Koranyi ball of the given radius inside [-R,R]^2 x [-R^2,R^2]; unknowns
  /// are the nodes with gauge < R, boundary handled by zero extension.
  static DomainPtr koranyi_ball(std::size_t n, double radius = 1.0);

  const std::array<std::size_t, 3>& dims() const { return n_; }
  const std::array<double, 3>& spacing() const { return h_; }
  const std::array<double, 3>& half_extent() const { return half_; }
  double cell_volume() const { return h_[0] * h_[1] * h_[2]; }
  BoundaryPolicy policy() const { return policy_; }
  std::optional<double> ball_radius() const { return ball_radius_; }

  std::size_t node_count() const { return n_[0] * n_[1] * n_[2]; }
  std::size_t padded_count() const { return padded_[0] * padded_[1] * padded_[2]; }
  const std::array<std::size_t, 3>& padded_dims() const { return padded_; }

  /// Storage offset of (i,j,k); valid for -2 <= index <= n+1.
  std::size_t offset(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) const {
    return (static_cast<std::size_t>(k + kGhost) * padded_[1] +
            static_cast<std::size_t>(j + kGhost)) *
               padded_[0] +
           static_cast<std::size_t>(i + kGhost);
  }
  std::array<std::ptrdiff_t, 3> stride() const {
    return {1, static_cast<std::ptrdiff_t>(padded_[0]),
            static_cast<std::ptrdiff_t>(padded_[0] * padded_[1])};
  }

  GaugePoint coordinate(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) const {
    return {-half_[0] + static_cast<double>(i) * h_[0],
            -half_[1] + static_cast<double>(j) * h_[1],
            -half_[2] + static_cast<double>(k) * h_[2]};
  }

  NodeIndex index_of(std::size_t offset) const {
    return {static_cast<std::ptrdiff_t>(offset % padded_[0]) - kGhost,
            static_cast<std::ptrdiff_t>((offset / padded_[0]) % padded_[1]) - kGhost,
            static_cast<std::ptrdiff_t>(offset / (padded_[0] * padded_[1])) - kGhost};
  }
  GaugePoint coordinate_of(std::size_t offset) const {
    const NodeIndex n = index_of(offset);
    return coordinate(n.i, n.j, n.k);
  }

  bool is_unknown(std::size_t offset) const { return unknown_[offset] != 0; }
  /// Storage offsets of the unknown nodes, x-fastest order.
  const std::vector<std::size_t>& unknowns() const { return unknown_offsets_; }
  /// Storage offsets of all physical nodes, x-fastest order.
  const std::vector<std::size_t>& physical_nodes() const { return physical_offsets_; }
  std::optional<std::size_t> origin_offset() const { return origin_; }
  bool contains_origin() const { return origin_.has_value() || region_contains_origin_; }

  /// Quadrature measure of a physical node (zero outside the region).
  double measure(std::size_t offset) const { return measure_[offset]; }
  double total_measure() const { return total_measure_; }
  double energy_weight(std::size_t offset) const { return energy_weight_[offset]; }

  /// Per-node mean of rho^{-a} over the node's cell (ghost nodes keep the
  /// point value), cached per exponent. a in [0, 4).
  std::shared_ptr<const std::vector<double>> singular_weight(double a) const;

  /// Mirror source of a storage node under the ghost policy, or nullopt when
  /// the value is identically zero.
  std::optional<std::size_t> extension_source(std::ptrdiff_t i, std::ptrdiff_t j,
                                              std::ptrdiff_t k) const;
  /// extension_source for every storage node; kNoSource marks zero nodes.
  static constexpr std::size_t kNoSource = static_cast<std::size_t>(-1);
  const std::vector<std::size_t>& extension_map() const { return extension_map_; }

  bool same_geometry(const GridDomain& other) const;

 private:
  GridDomain() = default;
  void allocate();
  void finalize();

  std::array<std::size_t, 3> n_{};
  std::array<std::size_t, 3> padded_{};
  std::array<double, 3> h_{};
  std::array<double, 3> half_{};
  BoundaryPolicy policy_ = BoundaryPolicy::ClampedReflect;
  std::optional<double> ball_radius_;
  std::vector<unsigned char> unknown_;
  std::vector<std::size_t> unknown_offsets_;
  std::vector<std::size_t> physical_offsets_;
  std::vector<double> measure_;
  std::vector<double> energy_weight_;
  std::vector<std::size_t> extension_map_;
  double total_measure_ = 0.0;
  std::optional<std::size_t> origin_;
  bool region_contains_origin_ = false;

  struct WeightCache;
  std::shared_ptr<WeightCache> cache_;
};

/// Real values on all storage nodes of a domain, ghosts included.
class GridField {
 public:
  GridField() = default;
  explicit GridField(DomainPtr domain, double fill = 0.0);

  /// Samples f at every storage node (ghosts included, no boundary policy).
  static GridField from_function(DomainPtr domain,
                                 const std::function<double(const GaugePoint&)>& f);

  const GridDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t offset) { return values_[offset]; }
  double operator[](std::size_t offset) const { return values_[offset]; }
  double& at(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) {
    return values_[domain_->offset(i, j, k)];
  }
  double at(std::ptrdiff_t i, std::ptrdiff_t j, std::ptrdiff_t k) const {
    return values_[domain_->offset(i, j, k)];
  }

  /// Zeroes every non-unknown node, then fills ghosts from the policy.
  void apply_boundary();

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double s);
  /// this += s * o
  void axpy(double s, const GridField& o);

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);

/// Euclidean dot product over the unknown nodes (no volume factor).
double unknown_dot(const GridField& u, const GridField& v);

void require_same_domain(const GridField& u, const GridField& v, const char* what);

}  // namespace heisadams
