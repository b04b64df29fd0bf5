#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/dataset.hpp"
#include "trajkit/embedding.hpp"

namespace trajkit {

struct Pattern {
  int cluster = 0;
  SubTrajectorySpan span;  // on the cluster representative
  double length = 0.0;     // polyline length of the span
};

struct ClusterPatterns {
  int cluster = 0;
  std::string representative_id;
  std::vector<double> theta;  // per point of the representative
  std::vector<Pattern> patterns;
};

struct PatternSet {
  std::vector<ClusterPatterns> clusters;  // ascending cluster index
  double gamma = 0.0;
  std::size_t min_len = 3;

  std::vector<Pattern> all() const;
  std::size_t count() const;
};

// Distinct cluster indices in ascending order with member positions in dataset order.
std::vector<std::pair<int, std::vector<std::size_t>>> cluster_members(const LabeledDataset& dataset);

// Mean of member mean maps per cluster, ascending cluster index. Throws
// ValidationError when clusters are missing or a listed cluster is empty.
std::vector<Embedding> cluster_means(const EmbeddedDataset& embedded, const std::map<std::string, int>& clusters);

// Position (into `members`) of the member with the largest <Phi(P_X), c>; the
// first in member order wins ties.
std::size_t representative(const std::vector<Embedding>& members, const Embedding& c);

// Sum of Euclidean distances between consecutive points inside the span.
double pattern_length(const Trajectory& trajectory, const SubTrajectorySpan& span);

struct MineParams {
  std::size_t psi = 16;
  std::size_t t = 100;
  double gamma = 0.06;
  std::size_t min_len = 3;
  std::uint64_t seed = 0;
  CellRule rule = CellRule::voronoi;
};

// Scores every point of each cluster representative against the average of
// the cluster means and keeps maximal runs with theta > gamma.
PatternSet mine_patterns(const LabeledDataset& dataset, const MineParams& params);
PatternSet mine_patterns(const LabeledDataset& dataset, const FeatureModel& model, double gamma, std::size_t min_len);

}  // namespace trajkit
