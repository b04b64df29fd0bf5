#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace trajkit {

// A single observation. Used at construction boundaries; trajectories store
// coordinates contiguously.
struct Point {
  std::vector<double> coords;
  std::optional<double> time;
};

// Flat row-major storage of N points of dimension d.
class PointMatrix {
 public:
  PointMatrix() = default;
  PointMatrix(std::size_t dim, std::vector<double> data);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ ? data_.size() / dim_ : 0; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  const std::vector<double>& data() const noexcept { return data_; }

  void push_back(std::span<const double> p);

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Ordered sequence of points of one moving object. Positions are 0-based in
// code; SubTrajectorySpan uses the 1-based inclusive convention.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(std::string id, std::size_t dim, std::vector<double> coords,
             std::vector<double> times = {});
  static Trajectory from_points(std::string id, const std::vector<Point>& points);

  const std::string& id() const noexcept { return id_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ ? coords_.size() / dim_ : 0; }
  bool empty() const noexcept { return size() == 0; }
  bool has_time() const noexcept { return !times_.empty(); }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double time(std::size_t i) const { return times_.at(i); }
  const std::vector<double>& coords() const noexcept { return coords_; }
  const std::vector<double>& times() const noexcept { return times_; }

  // Throws ValidationError on empty, non-finite or time-decreasing content.
  void validate() const;

  // Copy translated by `offset` (one entry per dimension).
  Trajectory translated(std::span<const double> offset) const;

 private:
  std::string id_;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<double> times_;
};

// Contiguous sub-trajectory [a, b], 1-based inclusive.
struct SubTrajectorySpan {
  std::string trajectory_id;
  std::size_t a = 1;
  std::size_t b = 1;

  std::size_t length() const noexcept { return b - a + 1; }
  bool operator==(const SubTrajectorySpan&) const = default;
};

enum class Label { normal = 0, anomalous = 1 };

struct DimensionRange {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const DimensionRange&) const = default;
};

struct LabeledDataset {
  std::vector<Trajectory> trajectories;
  std::optional<std::map<std::string, Label>> labels;
  std::optional<std::map<std::string, int>> clusters;
  std::vector<DimensionRange> normalization;

  std::size_t size() const noexcept { return trajectories.size(); }
  bool empty() const noexcept { return trajectories.empty(); }
  // 0 for an empty dataset.
  std::size_t dim() const noexcept { return trajectories.empty() ? 0 : trajectories.front().dim(); }
  std::size_t total_points() const noexcept;

  const Trajectory& find(const std::string& id) const;

  // Checks unique ids, uniform dimension, per-trajectory invariants and
  // consistency of labels/clusters/normalization with the trajectories.
  void validate() const;

  // Trajectories with the given label (label map required).
  LabeledDataset with_label(Label label) const;
};

// All points of all trajectories, trajectory order then point order.
PointMatrix concat_points(const LabeledDataset& dataset);

// Global per-dimension min-max scaling into [0, 1]. With `include_time` the
// timestamp is appended as an extra coordinate before scaling. Constant
// dimensions map to 0.5.
LabeledDataset normalize(const LabeledDataset& dataset, bool include_time = false);

// Maps normalized coordinates back through the dataset's normalization record.
LabeledDataset denormalize(const LabeledDataset& dataset);

double euclidean(std::span<const double> a, std::span<const double> b);
double squared_euclidean(std::span<const double> a, std::span<const double> b);

}  // namespace trajkit
