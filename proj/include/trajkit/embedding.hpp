#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trajkit/dataset.hpp"
#include "trajkit/feature.hpp"
#include "trajkit/isolation_kernel.hpp"
#include "trajkit/nystrom.hpp"

namespace trajkit {

// Any fitted point feature map.
using FeatureModel = std::variant<PartitioningModel, NystromModel>;

Scheme scheme_of(const FeatureModel& model);
std::size_t input_dim(const FeatureModel& model);

// Point embedding under either scheme.
Embedding embed_point(const FeatureModel& model, std::span<const double> x);

// Kernel mean map: the average of the point embeddings of every point in `points`.
// Throws ValidationError for an empty trajectory.
Embedding mean_map(const FeatureModel& model, const Trajectory& trajectory);
Embedding mean_map(const FeatureModel& model, const PointMatrix& points);

// <a, b>; with `normalized`, divided by sqrt(<a,a><b,b>) (0 when either norm is 0).
// Throws ValidationError when schemes or dimensions differ.
double distributional_kernel(const Embedding& a, const Embedding& b, bool normalized = false);

// Coordinate-wise mean. Throws ValidationError for an empty input or mixed schemes.
Embedding mean_of_maps(std::span<const Embedding> embeddings);

struct EmbeddedDataset {
  std::vector<std::string> ids;
  std::vector<Embedding> embeddings;
  Scheme scheme;

  std::size_t size() const noexcept { return embeddings.size(); }
  std::size_t dim() const noexcept { return scheme.dim(); }
  // All embeddings as rows of one matrix (the set of mapped points).
  PointMatrix as_points() const;
};

// Mean map of every trajectory, in dataset order.
EmbeddedDataset embed_dataset(const FeatureModel& model, const LabeledDataset& dataset);

// Pairwise distributional kernel values, row-major n x n.
std::vector<double> kernel_matrix(const EmbeddedDataset& embedded, bool normalized = false);

}  // namespace trajkit
