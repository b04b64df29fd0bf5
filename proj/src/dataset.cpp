#include "trajkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "trajkit/error.hpp"

namespace trajkit {

PointMatrix::PointMatrix(std::size_t dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0 ? !data_.empty() : data_.size() % dim_ != 0) {
    throw ValidationError("point matrix data size is not a multiple of its dimension");
  }
}

void PointMatrix::push_back(std::span<const double> p) {
  if (dim_ == 0 && data_.empty()) dim_ = p.size();
  if (p.size() != dim_) throw ValidationError("point dimension mismatch");
  data_.insert(data_.end(), p.begin(), p.end());
}

Trajectory::Trajectory(std::string id, std::size_t dim, std::vector<double> coords,
                       std::vector<double> times)
    : id_(std::move(id)), dim_(dim), coords_(std::move(coords)), times_(std::move(times)) {
  if (dim_ == 0) throw ValidationError("trajectory '" + id_ + "': dimension must be >= 1");
  if (coords_.size() % dim_ != 0) {
    throw ValidationError("trajectory '" + id_ + "': coordinate count is not a multiple of d");
  }
  if (!times_.empty() && times_.size() != size()) {
    throw ValidationError("trajectory '" + id_ + "': timestamp count differs from point count");
  }
}

Trajectory Trajectory::from_points(std::string id, const std::vector<Point>& points) {
  if (points.empty()) throw ValidationError("trajectory '" + id + "' has no points");
  const std::size_t d = points.front().coords.size();
  const bool timed = points.front().time.has_value();
  std::vector<double> coords;
  std::vector<double> times;
  coords.reserve(points.size() * d);
  for (const auto& p : points) {
    if (p.coords.size() != d) {
      throw ValidationError("trajectory '" + id + "': inconsistent dimensionality");
    }
    if (p.time.has_value() != timed) {
      throw ValidationError("trajectory '" + id + "': timestamps must be given for all or no points");
    }
    coords.insert(coords.end(), p.coords.begin(), p.coords.end());
    if (timed) times.push_back(*p.time);
  }
  return Trajectory(std::move(id), d, std::move(coords), std::move(times));
}

void Trajectory::validate() const {
  if (empty()) throw ValidationError("trajectory '" + id_ + "' has no points");
  for (double v : coords_) {
    if (!std::isfinite(v)) {
      throw ValidationError("trajectory '" + id_ + "' has a non-finite coordinate");
    }
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) {
      throw ValidationError("trajectory '" + id_ + "' has a non-finite timestamp");
    }
    if (i > 0 && times_[i] < times_[i - 1]) {
      throw ValidationError("trajectory '" + id_ + "': timestamps decrease");
    }
  }
}

Trajectory Trajectory::translated(std::span<const double> offset) const {
  if (offset.size() != dim_) throw ValidationError("translation dimension mismatch");
  std::vector<double> c = coords_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += offset[i % dim_];
  return Trajectory(id_, dim_, std::move(c), times_);
}

std::size_t LabeledDataset::total_points() const noexcept {
  std::size_t n = 0;
  for (const auto& t : trajectories) n += t.size();
  return n;
}

const Trajectory& LabeledDataset::find(const std::string& id) const {
  auto it = std::find_if(trajectories.begin(), trajectories.end(),
                         [&](const Trajectory& t) { return t.id() == id; });
  if (it == trajectories.end()) throw ValidationError("unknown trajectory id '" + id + "'");
  return *it;
}

void LabeledDataset::validate() const {
  std::set<std::string> ids;
  const std::size_t d = dim();
  for (const auto& t : trajectories) {
    t.validate();
    if (t.dim() != d) throw ValidationError("trajectory '" + t.id() + "': inconsistent dimensionality");
    if (!ids.insert(t.id()).second) throw ValidationError("duplicate trajectory id '" + t.id() + "'");
  }
  if (labels) {
    for (const auto& [id, label] : *labels) {
      if (!ids.count(id)) throw ValidationError("label for unknown trajectory id '" + id + "'");
    }
  }
  if (clusters) {
    if (clusters->size() != ids.size()) {
      throw ValidationError("cluster assignment must cover every trajectory exactly once");
    }
    for (const auto& [id, c] : *clusters) {
      if (!ids.count(id)) throw ValidationError("cluster for unknown trajectory id '" + id + "'");
      if (c < 1) throw ValidationError("cluster indices are 1-based");
    }
  }
  if (!normalization.empty() && normalization.size() != d) {
    throw ValidationError("normalization record must have one entry per dimension");
  }
}

LabeledDataset LabeledDataset::with_label(Label label) const {
  if (!labels) throw ConfigError("dataset has no labels");
  LabeledDataset out;
  out.normalization = normalization;
  out.labels.emplace();
  if (clusters) out.clusters.emplace();
  for (const auto& t : trajectories) {
    auto it = labels->find(t.id());
    const Label l = it == labels->end() ? Label::normal : it->second;
    if (l != label) continue;
    out.trajectories.push_back(t);
    (*out.labels)[t.id()] = l;
    if (clusters) (*out.clusters)[t.id()] = clusters->at(t.id());
  }
  return out;
}

PointMatrix concat_points(const LabeledDataset& dataset) {
  std::vector<double> data;
  data.reserve(dataset.total_points() * dataset.dim());
  for (const auto& t : dataset.trajectories) {
    data.insert(data.end(), t.coords().begin(), t.coords().end());
  }
  return PointMatrix(dataset.dim(), std::move(data));
}

LabeledDataset normalize(const LabeledDataset& dataset, bool include_time) {
  if (dataset.empty()) throw ValidationError("cannot normalize an empty dataset");
  dataset.validate();
  const std::size_t d_in = dataset.dim();
  if (include_time) {
    for (const auto& t : dataset.trajectories) {
      if (!t.has_time()) throw ValidationError("include_time requires timestamps on every trajectory");
    }
  }
  const std::size_t d = d_in + (include_time ? 1 : 0);

  // Build the (possibly time-augmented) coordinate arrays first.
  std::vector<std::vector<double>> coords;
  coords.reserve(dataset.size());
  for (const auto& t : dataset.trajectories) {
    if (!include_time) {
      coords.push_back(t.coords());
      continue;
    }
    std::vector<double> c;
    c.reserve(t.size() * d);
    for (std::size_t i = 0; i < t.size(); ++i) {
      auto p = t.point(i);
      c.insert(c.end(), p.begin(), p.end());
      c.push_back(t.time(i));
    }
    coords.push_back(std::move(c));
  }

  std::vector<DimensionRange> range(d, {INFINITY, -INFINITY});
  for (const auto& c : coords) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto& r = range[i % d];
      r.min = std::min(r.min, c[i]);
      r.max = std::max(r.max, c[i]);
    }
  }

  LabeledDataset out;
  out.labels = dataset.labels;
  out.clusters = dataset.clusters;
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    auto& c = coords[k];
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& r = range[i % d];
      c[i] = r.max > r.min ? (c[i] - r.min) / (r.max - r.min) : 0.5;
    }
    const auto& src = dataset.trajectories[k];
    out.trajectories.emplace_back(src.id(), d, std::move(c), src.times());
  }

  // Compose with an existing record so the stored ranges always refer to raw units.
  out.normalization = range;
  if (dataset.normalization.size() == d_in) {
    for (std::size_t j = 0; j < d_in; ++j) {
      const auto& prev = dataset.normalization[j];
      const double span = prev.max - prev.min;
      if (span > 0.0) {
        out.normalization[j] = {prev.min + span * range[j].min, prev.min + span * range[j].max};
      } else {
        out.normalization[j] = prev;
      }
    }
  }
  return out;
}

LabeledDataset denormalize(const LabeledDataset& dataset) {
  const std::size_t d = dataset.dim();
  if (dataset.normalization.size() != d) {
    throw ValidationError("dataset carries no normalization record for its dimension");
  }
  LabeledDataset out = dataset;
  out.normalization.clear();
  for (auto& t : out.trajectories) {
    std::vector<double> c = t.coords();
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& r = dataset.normalization[i % d];
      c[i] = r.max > r.min ? r.min + c[i] * (r.max - r.min) : r.min;
    }
    t = Trajectory(t.id(), d, std::move(c), t.times());
  }
  return out;
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean(a, b));
}

}  // namespace trajkit
