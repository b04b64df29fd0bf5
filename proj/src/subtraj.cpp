#include "trajkit/subtraj.hpp"

#include "trajkit/error.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

std::vector<double> score_points(const FeatureModel& model, const LabeledDataset& normal, const Trajectory& q) {
  if (normal.empty()) throw ValidationError("the normal dataset is empty");
  if (q.empty()) throw ValidationError("query trajectory is empty");
  std::vector<Embedding> maps(normal.size());
  parallel_for(normal.size(), [&](std::size_t i) { maps[i] = mean_map(model, normal.trajectories[i]); });
  const Embedding g_bar = mean_of_maps(maps);
  std::vector<double> beta(q.size());
  parallel_for(q.size(), [&](std::size_t i) { beta[i] = dot(embed_point(model, q.point(i)).values(), g_bar.values()); });
  return beta;
}

std::vector<SubTrajectorySpan> extract_runs(const std::vector<bool>& selected, std::size_t min_len,
                                            const std::string& trajectory_id) {
  if (min_len < 1) throw ParameterError("min_len must be >= 1");
  std::vector<SubTrajectorySpan> out;
  std::size_t i = 0;
  while (i < selected.size()) {
    if (!selected[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < selected.size() && selected[j]) ++j;
    if (j - i >= min_len) out.push_back({trajectory_id, i + 1, j});
    i = j;
  }
  return out;
}

std::vector<SubTrajectorySpan> extract_maximal(const std::vector<double>& scores, double tau, std::size_t min_len,
                                               const std::string& trajectory_id) {
  std::vector<bool> sel(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) sel[i] = scores[i] <= tau;
  return extract_runs(sel, min_len, trajectory_id);
}

SubTrajReport detect_subtraj(const LabeledDataset& normal, const Trajectory& q, const SubTrajParams& params) {
  if (normal.empty()) throw ValidationError("the normal dataset is empty");
  const FeatureModel model = PartitioningModel::fit(concat_points(normal), {params.psi, params.t, params.seed, params.rule});
  SubTrajReport r;
  r.query_id = q.id();
  r.tau = params.tau;
  r.min_len = params.min_len;
  r.beta = score_points(model, normal, q);
  r.spans = extract_maximal(r.beta, params.tau, params.min_len, q.id());
  return r;
}

std::vector<SubTrajectorySpan> ground_truth_labeler(const LabeledDataset& normal, const Trajectory& q, double radius,
                                                    std::size_t min_len) {
  if (!(radius > 0.0)) throw ParameterError("neighbourhood radius must be > 0");
  const double r2 = radius * radius;
  std::vector<char> anomalous(q.size(), 1);
  parallel_for(q.size(), [&](std::size_t i) {
    for (const auto& t : normal.trajectories) {
      for (std::size_t j = 0; j < t.size(); ++j) {
        if (squared_euclidean(q.point(i), t.point(j)) <= r2) {
          anomalous[i] = 0;
          return;
        }
      }
    }
  });
  return extract_runs(std::vector<bool>(anomalous.begin(), anomalous.end()), min_len, q.id());
}

}  // namespace trajkit
