#include "trajkit/patterns.hpp"

#include <map>

#include "trajkit/error.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/subtraj.hpp"

namespace trajkit {

std::vector<Pattern> PatternSet::all() const {
  std::vector<Pattern> out;
  for (const auto& c : clusters) out.insert(out.end(), c.patterns.begin(), c.patterns.end());
  return out;
}

std::size_t PatternSet::count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.patterns.size();
  return n;
}

std::vector<std::pair<int, std::vector<std::size_t>>> cluster_members(const LabeledDataset& dataset) {
  if (!dataset.clusters) throw ValidationError("dataset has no cluster assignment");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto it = dataset.clusters->find(dataset.trajectories[i].id());
    if (it == dataset.clusters->end()) {
      throw ValidationError("trajectory '" + dataset.trajectories[i].id() + "' has no cluster");
    }
    groups[it->second].push_back(i);
  }
  return {groups.begin(), groups.end()};
}

std::vector<Embedding> cluster_means(const EmbeddedDataset& embedded, const std::map<std::string, int>& clusters) {
  std::map<int, std::vector<Embedding>> groups;
  for (const auto& [id, c] : clusters) groups[c];
  for (std::size_t i = 0; i < embedded.size(); ++i) {
    auto it = clusters.find(embedded.ids[i]);
    if (it == clusters.end()) throw ValidationError("trajectory '" + embedded.ids[i] + "' has no cluster");
    groups[it->second].push_back(embedded.embeddings[i]);
  }
  std::vector<Embedding> out;
  for (const auto& [c, members] : groups) {
    if (members.empty()) throw ValidationError("cluster " + std::to_string(c) + " is empty");
    out.push_back(mean_of_maps(members));
  }
  return out;
}

std::size_t representative(const std::vector<Embedding>& members, const Embedding& c) {
  if (members.empty()) throw ValidationError("cluster is empty");
  std::size_t best = 0;
  double best_k = distributional_kernel(members[0], c);
  for (std::size_t i = 1; i < members.size(); ++i) {
    const double k = distributional_kernel(members[i], c);
    if (k > best_k) {
      best = i;
      best_k = k;
    }
  }
  return best;
}

double pattern_length(const Trajectory& trajectory, const SubTrajectorySpan& span) {
  if (span.a < 1 || span.b < span.a || span.b > trajectory.size()) throw ValidationError("span outside trajectory");
  double len = 0.0;
  for (std::size_t i = span.a; i < span.b; ++i) len += euclidean(trajectory.point(i - 1), trajectory.point(i));
  return len;
}

PatternSet mine_patterns(const LabeledDataset& dataset, const FeatureModel& model, double gamma, std::size_t min_len) {
  const auto groups = cluster_members(dataset);
  if (groups.empty()) throw ValidationError("no clusters to mine");
  const EmbeddedDataset embedded = embed_dataset(model, dataset);

  std::vector<Embedding> means;
  std::vector<std::vector<Embedding>> member_maps;
  for (const auto& [c, idx] : groups) {
    std::vector<Embedding> m;
    for (auto i : idx) m.push_back(embedded.embeddings[i]);
    means.push_back(mean_of_maps(m));
    member_maps.push_back(std::move(m));
  }
  const Embedding c_bar = mean_of_maps(means);

  PatternSet out;
  out.gamma = gamma;
  out.min_len = min_len;
  out.clusters.resize(groups.size());
  parallel_for(groups.size(), [&](std::size_t g) {
    const auto& [cluster, idx] = groups[g];
    const Trajectory& rep = dataset.trajectories[idx[representative(member_maps[g], means[g])]];
    ClusterPatterns cp;
    cp.cluster = cluster;
    cp.representative_id = rep.id();
    cp.theta.resize(rep.size());
    std::vector<bool> keep(rep.size());
    for (std::size_t i = 0; i < rep.size(); ++i) {
      cp.theta[i] = dot(embed_point(model, rep.point(i)).values(), c_bar.values());
      keep[i] = cp.theta[i] > gamma;
    }
    for (auto& span : extract_runs(keep, min_len, rep.id())) {
      const double len = pattern_length(rep, span);
      cp.patterns.push_back({cluster, std::move(span), len});
    }
    out.clusters[g] = std::move(cp);
  });
  return out;
}

PatternSet mine_patterns(const LabeledDataset& dataset, const MineParams& params) {
  const FeatureModel model = PartitioningModel::fit(concat_points(dataset), {params.psi, params.t, params.seed, params.rule});
  return mine_patterns(dataset, model, params.gamma, params.min_len);
}

}  // namespace trajkit
