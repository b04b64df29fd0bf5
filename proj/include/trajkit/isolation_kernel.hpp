#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trajkit/dataset.hpp"
#include "trajkit/feature.hpp"

namespace trajkit {

// How a point is mapped to a cell of one partitioning.
//  voronoi:     the nearest anchor's cell, always.
//  hypersphere: the nearest anchor's cell only if the point lies within that
//               anchor's radius (distance to its nearest fellow anchor);
//               otherwise the point is outside every cell of the partitioning.
enum class CellRule { voronoi, hypersphere };

const char* to_string(CellRule rule);
CellRule cell_rule_from_string(const std::string& s);

struct IsolationParams {
  std::size_t psi = 16;
  std::size_t t = 100;
  std::uint64_t seed = 0;
  CellRule rule = CellRule::voronoi;
};

inline constexpr std::int32_t kUncovered = -1;

// t independent partitionings of the input space, each defined by psi anchor
// points sampled without replacement from the fitting data.
class PartitioningModel {
 public:
  // Throws ParameterError if psi or t is zero or points.size() < psi.
  static PartitioningModel fit(const PointMatrix& points, const IsolationParams& params);

  // Rebuilds a model from stored anchors: `pool` holds the distinct anchor
  // points and `anchor_index[p * psi + j]` names the pool row used as anchor j
  // of partitioning p.
  static PartitioningModel from_anchors(const IsolationParams& params, PointMatrix pool,
                                        std::vector<std::uint32_t> anchor_index);

  std::size_t psi() const noexcept { return params_.psi; }
  std::size_t t() const noexcept { return params_.t; }
  std::size_t dim() const noexcept { return pool_.dim(); }
  std::uint64_t seed() const noexcept { return params_.seed; }
  CellRule rule() const noexcept { return params_.rule; }
  const IsolationParams& params() const noexcept { return params_; }
  std::size_t feature_dim() const noexcept { return params_.psi * params_.t; }
  Scheme scheme() const { return Scheme::isolation(params_.psi, params_.t); }
  // Value of a selected feature entry, 1/sqrt(t).
  double feature_value() const noexcept { return feature_value_; }

  const PointMatrix& pool() const noexcept { return pool_; }
  const std::vector<std::uint32_t>& anchor_index() const noexcept { return anchor_index_; }
  std::span<const double> anchor(std::size_t partition, std::size_t j) const {
    return pool_.row(anchor_index_[partition * params_.psi + j]);
  }
  // Squared radius of anchor j in partitioning p (infinite when psi == 1).
  double squared_radius(std::size_t partition, std::size_t j) const {
    return radius2_[partition * params_.psi + j];
  }

  // Cell index in [0, psi) per partitioning, or kUncovered.
  // Throws ValidationError on dimension mismatch.
  void assign(std::span<const double> x, std::span<std::int32_t> cells) const;
  std::vector<std::int32_t> assign(std::span<const double> x) const;

 private:
  PartitioningModel() = default;
  void build_caches();

  IsolationParams params_;
  PointMatrix pool_;
  std::vector<std::uint32_t> anchor_index_;
  std::vector<double> radius2_;
  // Per-partitioning anchors in dimension-major order for low-dimensional inputs.
  std::vector<double> local_;
  double feature_value_ = 1.0;
};

// phi(x): t entries equal to 1/sqrt(t) under the voronoi rule; uncovered
// partitionings contribute nothing under the hypersphere rule.
Embedding embed_point(const PartitioningModel& model, std::span<const double> x);

// (1/t) * number of partitionings in which x and y share a cell.
double point_kernel(const PartitioningModel& model, std::span<const double> x, std::span<const double> y);

// Index of the smallest value, lowest index among ties. Requires a non-empty input.
std::size_t tie_break_nearest(std::span<const double> distances);

}  // namespace trajkit
