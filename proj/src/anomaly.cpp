#include "trajkit/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajkit/error.hpp"
#include "trajkit/eval.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {
namespace {

constexpr std::uint64_t kLevel2SeedOffset = 0x9e3779b97f4a7c15ull;

struct LofState {
  std::vector<double> kdist;
  std::vector<double> lrd;
  std::vector<double> score;
};

// k smallest entries of row (excluding `self`), plus every further entry tied
// with the k-th: the classical k-distance neighbourhood.
std::vector<std::size_t> knn(std::span<const double> row, std::size_t self, std::size_t k, double* kdist) {
  std::vector<std::size_t> idx;
  idx.reserve(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j != self) idx.push_back(j);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return row[a] < row[b]; });
  const double kd = row[idx[k - 1]];
  std::size_t end = k;
  while (end < idx.size() && row[idx[end]] <= kd) ++end;
  idx.resize(end);
  *kdist = kd;
  return idx;
}

double density(std::span<const double> row, const std::vector<std::size_t>& nbrs, const std::vector<double>& kdist) {
  double reach = 0.0;
  for (auto j : nbrs) reach += std::max(kdist[j], row[j]);
  reach /= static_cast<double>(nbrs.size());
  return reach > 0.0 ? std::min(kLofDensityCap, 1.0 / reach) : kLofDensityCap;
}

LofState lof_from_matrix(const std::vector<double>& d, std::size_t n, std::size_t k) {
  if (k < 1 || k + 1 > n) {
    throw ParameterError("LOF requires 1 <= k <= n - 1 (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  LofState s;
  s.kdist.resize(n);
  s.lrd.resize(n);
  s.score.resize(n);
  std::vector<std::vector<std::size_t>> nbrs(n);
  auto row = [&](std::size_t i) { return std::span<const double>(d.data() + i * n, n); };
  parallel_for(n, [&](std::size_t i) { nbrs[i] = knn(row(i), i, k, &s.kdist[i]); });
  parallel_for(n, [&](std::size_t i) { s.lrd[i] = density(row(i), nbrs[i], s.kdist); });
  parallel_for(n, [&](std::size_t i) {
    double sum = 0.0;
    for (auto j : nbrs[i]) sum += s.lrd[j];
    s.score[i] = sum / static_cast<double>(nbrs[i].size()) / s.lrd[i];
  });
  return s;
}

std::vector<double> feature_distances(const EmbeddedDataset& e) {
  const std::size_t n = e.size();
  std::vector<double> d(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = euclidean(e.embeddings[i].values(), e.embeddings[j].values());
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) d[i * n + j] = d[j * n + i];
  }
  return d;
}

FeatureModel fit_level2(const PointMatrix& pi, const DetectConfig& c) {
  const std::uint64_t seed = c.seed + kLevel2SeedOffset;
  if (c.detector == DetectorKind::idk2) {
    return PartitioningModel::fit(pi, {*c.psi2, *c.t2, seed, c.rule});
  }
  return NystromModel::fit(pi, {*c.components2, *c.sigma2, seed});
}

double level2_score(const FeatureModel& level2, const Embedding& mean, std::span<const double> g) {
  return dot(embed_point(level2, g).values(), mean.values());
}

void check_level2(const DetectConfig& c, std::size_t n) {
  if (c.detector == DetectorKind::idk2 && (*c.psi2 < 1 || *c.psi2 > n)) {
    throw ParameterError("psi2=" + std::to_string(*c.psi2) + " must be in [1, " + std::to_string(n) +
                         "] (the number of trajectories)");
  }
  if (c.detector == DetectorKind::gdk && (*c.components2 < 1 || *c.components2 > n)) {
    throw ParameterError("components2=" + std::to_string(*c.components2) + " must be in [1, " + std::to_string(n) + "]");
  }
  if (c.detector == DetectorKind::lof && (*c.k < 1 || *c.k >= n)) {
    throw ParameterError("LOF requires 1 <= k <= n - 1 (k=" + std::to_string(*c.k) + ", n=" + std::to_string(n) + ")");
  }
}

}  // namespace

const char* to_string(Polarity p) { return p == Polarity::similarity ? "similarity" : "anomaly"; }

Polarity polarity_from_string(const std::string& s) {
  if (s == "similarity") return Polarity::similarity;
  if (s == "anomaly") return Polarity::anomaly;
  throw ConfigError("unknown polarity '" + s + "' (expected similarity or anomaly)");
}

const char* to_string(DetectorKind k) {
  switch (k) {
    case DetectorKind::idk2:
      return "idk2";
    case DetectorKind::gdk:
      return "gdk";
    case DetectorKind::lof:
      return "lof";
  }
  return "?";
}

DetectorKind detector_from_string(const std::string& s) {
  if (s == "idk2") return DetectorKind::idk2;
  if (s == "gdk") return DetectorKind::gdk;
  if (s == "lof") return DetectorKind::lof;
  throw ConfigError("unknown detector '" + s + "' (expected idk2, gdk or lof)");
}

AnomalyRanking AnomalyRanking::make(std::vector<std::string> ids, std::vector<double> scores, Polarity polarity) {
  if (ids.size() != scores.size()) throw ValidationError("ranking needs one score per id");
  AnomalyRanking r;
  r.ids = std::move(ids);
  r.scores = std::move(scores);
  r.polarity = polarity;
  r.order.resize(r.ids.size());
  std::iota(r.order.begin(), r.order.end(), 0);
  const auto& s = r.scores;
  if (polarity == Polarity::anomaly) {
    std::stable_sort(r.order.begin(), r.order.end(), [&](auto a, auto b) { return s[a] > s[b]; });
  } else {
    std::stable_sort(r.order.begin(), r.order.end(), [&](auto a, auto b) { return s[a] < s[b]; });
  }
  return r;
}

std::vector<std::size_t> AnomalyRanking::ranks() const {
  std::vector<std::size_t> rk(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rk[order[pos]] = pos + 1;
  return rk;
}

std::size_t pow2_floor(std::size_t v) {
  std::size_t p = 1;
  while (p * 2 <= v) p *= 2;
  return p;
}

DetectConfig DetectConfig::resolve(std::size_t n, std::size_t total_points) const {
  DetectConfig c = *this;
  if (!c.components) c.components = std::min<std::size_t>(100, total_points);
  if (!c.psi2) c.psi2 = std::clamp<std::size_t>(pow2_floor(std::max<std::size_t>(1, n / 2)), 2, 1024);
  if (!c.t2) c.t2 = c.t;
  if (!c.components2) c.components2 = std::min(*c.components, n);
  if (!c.sigma2) c.sigma2 = c.sigma;
  if (!c.k) c.k = std::min<std::size_t>(10, n > 1 ? n - 1 : 1);
  return c;
}

FeatureModel fit_feature_model(const PointMatrix& points, const DetectConfig& c) {
  if (c.scheme == SchemeKind::isolation) return PartitioningModel::fit(points, {c.psi, c.t, c.seed, c.rule});
  return NystromModel::fit(points, {c.components.value_or(100), c.sigma, c.seed});
}

std::vector<double> idk_point_scores(const FeatureModel& model, const PointMatrix& reference,
                                     const PointMatrix& points) {
  const Embedding mean = mean_map(model, reference);
  std::vector<double> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) { out[i] = dot(embed_point(model, points.row(i)).values(), mean.values()); });
  return out;
}

std::vector<double> idk_point_scores(const FeatureModel& model, const PointMatrix& points) {
  return idk_point_scores(model, points, points);
}

AnomalyRanking lof_scores(const DistanceMatrix& distances, std::size_t k) {
  auto s = lof_from_matrix(distances.values, distances.size(), k);
  return AnomalyRanking::make(distances.ids, std::move(s.score), Polarity::anomaly);
}

AnomalyRanking lof_scores(const EmbeddedDataset& embedded, std::size_t k) {
  auto s = lof_from_matrix(feature_distances(embedded), embedded.size(), k);
  return AnomalyRanking::make(embedded.ids, std::move(s.score), Polarity::anomaly);
}

DetectorModel::DetectorModel(DetectConfig config, FeatureModel level1)
    : config_(std::move(config)), level1_(std::move(level1)) {}

Polarity DetectorModel::polarity() const noexcept {
  return config_.detector == DetectorKind::lof ? Polarity::anomaly : Polarity::similarity;
}

DetectorModel DetectorModel::fit(const LabeledDataset& dataset, const DetectConfig& config) {
  const std::size_t n = dataset.size();
  if (n < 2) throw ParameterError("anomaly detection needs at least 2 trajectories");
  const DetectConfig c = config.resolve(n, dataset.total_points());
  check_level2(c, n);
  FeatureModel level1 = fit_feature_model(concat_points(dataset), c);
  EmbeddedDataset e = embed_dataset(level1, dataset);
  return fit_embedded(c, std::move(level1), std::move(e));
}

DetectorModel DetectorModel::fit_embedded(const DetectConfig& c, FeatureModel level1, EmbeddedDataset embedded) {
  const std::size_t n = embedded.size();
  DetectorModel m(c, std::move(level1));
  m.embedded_ = std::move(embedded);
  std::vector<double> scores(n);
  if (c.detector == DetectorKind::lof) {
    auto s = lof_from_matrix(feature_distances(m.embedded_), n, *c.k);
    m.knn_distance_ = std::move(s.kdist);
    m.lrd_ = std::move(s.lrd);
    scores = std::move(s.score);
  } else {
    const PointMatrix pi = m.embedded_.as_points();
    m.level2_ = fit_level2(pi, c);
    m.level2_mean_ = mean_map(*m.level2_, pi);
    parallel_for(n, [&](std::size_t i) { scores[i] = level2_score(*m.level2_, *m.level2_mean_, pi.row(i)); });
  }
  m.ranking_ = AnomalyRanking::make(m.embedded_.ids, std::move(scores), m.polarity());
  return m;
}

double DetectorModel::score(const Trajectory& trajectory) const {
  const Embedding g = mean_map(level1_, trajectory);
  if (config_.detector != DetectorKind::lof) return level2_score(*level2_, *level2_mean_, g.values());

  const std::size_t n = embedded_.size();
  std::vector<double> row(n);
  for (std::size_t j = 0; j < n; ++j) row[j] = euclidean(g.values(), embedded_.embeddings[j].values());
  double kd = 0.0;
  const auto nbrs = knn(row, n, *config_.k, &kd);
  const double own = density(row, nbrs, knn_distance_);
  double sum = 0.0;
  for (auto j : nbrs) sum += lrd_[j];
  return sum / static_cast<double>(nbrs.size()) / own;
}

AnomalyRanking detect(const LabeledDataset& dataset, const DetectConfig& config) {
  return DetectorModel::fit(dataset, config).ranking();
}

SearchGrid default_grid(std::size_t n, std::size_t total_points) {
  SearchGrid g;
  for (int q = 1; q <= 10; ++q) {
    const std::size_t psi = std::size_t{1} << q;
    if (psi <= total_points) g.psi.push_back(psi);
    if (psi <= n) g.psi2.push_back(psi);
  }
  for (int q = -10; q <= 5; ++q) g.sigma.push_back(std::ldexp(1.0, q));
  g.sigma2 = g.sigma;
  std::vector<std::size_t> ks = {1};
  for (int f = 1; f <= 9; ++f) ks.push_back(n * static_cast<std::size_t>(f) / 10);
  for (auto k : ks) {
    if (k >= 1 && k < n && std::find(g.k.begin(), g.k.end(), k) == g.k.end()) g.k.push_back(k);
  }
  return g;
}

SearchResult auto_search(const LabeledDataset& dataset, const DetectConfig& base, const std::optional<SearchGrid>& grid) {
  if (!dataset.labels) throw ConfigError("parameter search needs labels");
  const std::size_t n = dataset.size();
  if (n < 2) throw ParameterError("anomaly detection needs at least 2 trajectories");
  const SearchGrid g = grid ? *grid : default_grid(n, dataset.total_points());

  std::vector<DetectConfig> level1;
  if (base.scheme == SchemeKind::isolation) {
    for (auto psi : g.psi) {
      DetectConfig c = base;
      c.psi = psi;
      level1.push_back(c);
    }
  } else {
    for (auto sigma : g.sigma) {
      DetectConfig c = base;
      c.sigma = sigma;
      level1.push_back(c);
    }
  }
  auto level2 = [&](const DetectConfig& c) {
    std::vector<DetectConfig> out;
    switch (base.detector) {
      case DetectorKind::idk2:
        for (auto p : g.psi2) {
          DetectConfig d = c;
          d.psi2 = p;
          out.push_back(d);
        }
        break;
      case DetectorKind::gdk:
        for (auto s : g.sigma2) {
          DetectConfig d = c;
          d.sigma2 = s;
          out.push_back(d);
        }
        break;
      case DetectorKind::lof:
        for (auto k : g.k) {
          DetectConfig d = c;
          d.k = k;
          out.push_back(d);
        }
        break;
    }
    return out;
  };
  if (level1.empty()) throw ConfigError("empty parameter grid");

  const PointMatrix points = concat_points(dataset);
  SearchResult result;
  bool have = false;
  for (const auto& c1 : level1) {
    const DetectConfig r1 = c1.resolve(n, dataset.total_points());
    const FeatureModel model = fit_feature_model(points, r1);
    const EmbeddedDataset embedded = embed_dataset(model, dataset);
    for (const auto& c2 : level2(c1)) {
      const DetectConfig r = c2.resolve(n, dataset.total_points());
      check_level2(r, n);
      AnomalyRanking ranking = DetectorModel::fit_embedded(r, model, embedded).ranking();
      const double auc = roc_auc(ranking, *dataset.labels);
      result.table.push_back({r, auc});
      if (!have || auc > result.best_auc) {
        have = true;
        result.best_auc = auc;
        result.best = r;
        result.ranking = std::move(ranking);
      }
    }
  }
  if (!have) throw ConfigError("empty parameter grid");
  return result;
}

}  // namespace trajkit
