#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajkit/dataset.hpp"
#include "trajkit/distances.hpp"
#include "trajkit/embedding.hpp"

namespace trajkit {

// similarity: low score = anomalous. anomaly: high score = anomalous.
enum class Polarity { similarity, anomaly };

const char* to_string(Polarity p);
Polarity polarity_from_string(const std::string& s);

struct AnomalyRanking {
  std::vector<std::string> ids;
  std::vector<double> scores;
  Polarity polarity = Polarity::anomaly;
  // Indices into ids, most anomalous first; ties keep dataset order.
  std::vector<std::size_t> order;

  static AnomalyRanking make(std::vector<std::string> ids, std::vector<double> scores, Polarity polarity);
  std::size_t size() const noexcept { return ids.size(); }
  // 1-based rank of item i (1 = most anomalous).
  std::vector<std::size_t> ranks() const;
};

enum class DetectorKind { idk2, gdk, lof };

const char* to_string(DetectorKind k);
DetectorKind detector_from_string(const std::string& s);

// Level-1 feature map settings plus the level-2 detector. Unset level-2
// values are resolved from level-1 ones and the dataset size, see resolve().
struct DetectConfig {
  SchemeKind scheme = SchemeKind::isolation;
  DetectorKind detector = DetectorKind::idk2;
  std::size_t psi = 16;
  std::size_t t = 100;
  CellRule rule = CellRule::hypersphere;  // both isolation levels
  std::optional<std::size_t> components;  // default min(100, N)
  double sigma = 0.125;
  std::optional<std::size_t> psi2;        // default pow2 floor of n/2, within [2, 1024]
  std::optional<std::size_t> t2;          // default t
  std::optional<std::size_t> components2; // default min(components, n)
  std::optional<double> sigma2;           // default sigma
  std::optional<std::size_t> k;           // default min(10, n - 1)
  std::uint64_t seed = 0;

  // Copy with every optional filled in for a dataset of n trajectories and N points.
  DetectConfig resolve(std::size_t n, std::size_t total_points) const;
};

// Largest power of two <= v (v >= 1).
std::size_t pow2_floor(std::size_t v);

// Fits the level-1 map on all points of the dataset.
FeatureModel fit_feature_model(const PointMatrix& points, const DetectConfig& resolved);

// IDK score of each point: <phi(x), mean map of fitting points of `reference`>.
std::vector<double> idk_point_scores(const FeatureModel& model, const PointMatrix& reference,
                                     const PointMatrix& points);
// Convenience form scoring the reference points themselves.
std::vector<double> idk_point_scores(const FeatureModel& model, const PointMatrix& points);

// Classical local outlier factor. Reachability densities are capped at
// kLofDensityCap so exact duplicates score about 1. Throws ParameterError
// unless 1 <= k <= n - 1.
inline constexpr double kLofDensityCap = 1e12;
AnomalyRanking lof_scores(const DistanceMatrix& distances, std::size_t k);
AnomalyRanking lof_scores(const EmbeddedDataset& embedded, std::size_t k);

// A fitted two-stage detector: level-1 mean maps of every trajectory, then a
// point detector over the set of mapped points.
class DetectorModel {
 public:
  // Throws ParameterError when the dataset has fewer than 2 trajectories or a
  // resolved parameter is out of range.
  static DetectorModel fit(const LabeledDataset& dataset, const DetectConfig& config);
  // Level 2 only, over already embedded trajectories. `resolved` must be a
  // resolved configuration matching `level1`.
  static DetectorModel fit_embedded(const DetectConfig& resolved, FeatureModel level1, EmbeddedDataset embedded);

  const DetectConfig& config() const noexcept { return config_; }
  Polarity polarity() const noexcept;
  const EmbeddedDataset& embedded() const noexcept { return embedded_; }
  const FeatureModel& level1() const noexcept { return level1_; }

  // Scores of the fitting trajectories.
  const AnomalyRanking& ranking() const noexcept { return ranking_; }
  // Score of an unseen trajectory against the fitted models.
  double score(const Trajectory& trajectory) const;

 private:
  DetectorModel(DetectConfig config, FeatureModel level1);

  DetectConfig config_;
  FeatureModel level1_;
  EmbeddedDataset embedded_;
  std::optional<FeatureModel> level2_;
  std::optional<Embedding> level2_mean_;
  // LOF state over the embedded set.
  std::vector<double> knn_distance_;
  std::vector<double> lrd_;
  AnomalyRanking ranking_;
};

// Algorithm-level entry point: embed, fit the detector, rank.
AnomalyRanking detect(const LabeledDataset& dataset, const DetectConfig& config);

struct SearchGrid {
  std::vector<std::size_t> psi;   // level 1, isolation
  std::vector<double> sigma;      // level 1, nystrom
  std::vector<std::size_t> psi2;  // level 2, idk2
  std::vector<double> sigma2;     // level 2, gdk
  std::vector<std::size_t> k;     // lof
};

// psi and psi2 in {2^1..2^10} (capped at N and n), sigma and sigma2 in
// {2^-10..2^5}, k in {1, floor(0.1n), ..., floor(0.9n)} restricted to [1, n-1].
SearchGrid default_grid(std::size_t n, std::size_t total_points);

struct SearchEntry {
  DetectConfig config;
  double auc = 0.0;
};

struct SearchResult {
  DetectConfig best;
  double best_auc = 0.0;
  AnomalyRanking ranking;
  std::vector<SearchEntry> table;
};

// Grid search selecting the configuration with the highest ROC-AUC against the
// dataset's labels (first best wins on ties). The level-1 axis of the scheme
// is crossed with the axis of the detector; each level-1 map is fitted once. Throws ConfigError when the
// dataset has no labels.
SearchResult auto_search(const LabeledDataset& dataset, const DetectConfig& base,
                         const std::optional<SearchGrid>& grid = std::nullopt);

}  // namespace trajkit
