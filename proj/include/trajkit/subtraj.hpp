#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/dataset.hpp"
#include "trajkit/embedding.hpp"

namespace trajkit {

struct SubTrajReport {
  std::string query_id;
  std::vector<SubTrajectorySpan> spans;
  std::vector<double> beta;  // one score per point of the query
  double tau = 0.0;
  std::size_t min_len = 3;
};

// beta_x = <phi(x), g_bar> for every point of q, with g_bar the average of the
// mean maps of the normal trajectories. Throws ValidationError if `normal` is
// empty or q is empty.
std::vector<double> score_points(const FeatureModel& model, const LabeledDataset& normal, const Trajectory& q);

// Maximal runs of consecutive positions whose score satisfies `selected`,
// dropping runs shorter than min_len.
std::vector<SubTrajectorySpan> extract_runs(const std::vector<bool>& selected, std::size_t min_len,
                                            const std::string& trajectory_id = {});

// Maximal runs with score <= tau.
std::vector<SubTrajectorySpan> extract_maximal(const std::vector<double>& scores, double tau, std::size_t min_len,
                                               const std::string& trajectory_id = {});

struct SubTrajParams {
  std::size_t psi = 16;
  std::size_t t = 100;
  double tau = 0.0;
  std::size_t min_len = 3;
  std::uint64_t seed = 0;
  // Hyperspheres leave points far from all normal data uncovered (score 0),
  // which is what a zero threshold detects.
  CellRule rule = CellRule::hypersphere;
};

// Fits the isolation map on the normal trajectories' points, scores q and
// extracts the maximal anomalous sub-trajectories.
SubTrajReport detect_subtraj(const LabeledDataset& normal, const Trajectory& q, const SubTrajParams& params);

// Reference labelling: a point of q is anomalous iff no normal point lies
// within `radius` (Euclidean). Throws ParameterError if radius <= 0.
std::vector<SubTrajectorySpan> ground_truth_labeler(const LabeledDataset& normal, const Trajectory& q, double radius,
                                                    std::size_t min_len);

}  // namespace trajkit
