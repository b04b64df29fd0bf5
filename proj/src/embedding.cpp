#include "trajkit/embedding.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include "trajkit/error.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {

std::string Scheme::describe() const {
  std::ostringstream os;
  if (kind == SchemeKind::isolation) {
    os << "isolation(psi=" << size << ",t=" << t << ")";
  } else {
    os << "nystrom(c=" << size << ",sigma=" << sigma << ")";
  }
  return os.str();
}

Embedding::Embedding(std::vector<double> values, Scheme scheme)
    : values_(std::move(values)), scheme_(scheme) {
  if (values_.size() != scheme_.dim()) {
    throw ValidationError("embedding length " + std::to_string(values_.size()) + " does not match scheme " +
                          scheme_.describe());
  }
  double s = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("embedding has a non-finite entry");
    s += v * v;
  }
  norm_ = std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Scheme scheme_of(const FeatureModel& model) {
  return std::visit([](const auto& m) { return m.scheme(); }, model);
}

std::size_t input_dim(const FeatureModel& model) {
  return std::visit([](const auto& m) { return m.dim(); }, model);
}

Embedding embed_point(const FeatureModel& model, std::span<const double> x) {
  if (const auto* ik = std::get_if<PartitioningModel>(&model)) return embed_point(*ik, x);
  return embed_point_g(std::get<NystromModel>(model), x);
}

namespace {

template <typename PointAt>
Embedding mean_map_impl(const FeatureModel& model, std::size_t count, PointAt point_at) {
  if (count == 0) throw ValidationError("cannot embed an empty trajectory");
  const Scheme scheme = scheme_of(model);
  std::vector<double> v(scheme.dim(), 0.0);
  const double inv = 1.0 / static_cast<double>(count);
  if (const auto* ik = std::get_if<PartitioningModel>(&model)) {
    std::vector<std::uint32_t> counts(v.size(), 0);
    std::vector<std::int32_t> cells(ik->t());
    for (std::size_t i = 0; i < count; ++i) {
      ik->assign(point_at(i), cells);
      for (std::size_t p = 0; p < cells.size(); ++p) {
        if (cells[p] != kUncovered) ++counts[p * ik->psi() + cells[p]];
      }
    }
    const double fv = ik->feature_value();
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (counts[j]) v[j] = static_cast<double>(counts[j]) * fv * inv;
    }
  } else {
    const auto& ny = std::get<NystromModel>(model);
    std::vector<double> f(v.size());
    for (std::size_t i = 0; i < count; ++i) {
      ny.features(point_at(i), f);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += f[j];
    }
    for (double& x : v) x *= inv;
  }
  return Embedding(std::move(v), scheme);
}

}  // namespace

Embedding mean_map(const FeatureModel& model, const Trajectory& trajectory) {
  return mean_map_impl(model, trajectory.size(), [&](std::size_t i) { return trajectory.point(i); });
}

Embedding mean_map(const FeatureModel& model, const PointMatrix& points) {
  return mean_map_impl(model, points.size(), [&](std::size_t i) { return points.row(i); });
}

double distributional_kernel(const Embedding& a, const Embedding& b, bool normalized) {
  if (!(a.scheme() == b.scheme()) || a.size() != b.size()) {
    throw ValidationError("cannot compare embeddings of schemes " + a.scheme().describe() + " and " +
                          b.scheme().describe());
  }
  const double k = dot(a.values(), b.values());
  if (!normalized) return k;
  const double denom = a.norm() * b.norm();
  return denom > 0.0 ? k / denom : 0.0;
}

Embedding mean_of_maps(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) throw ValidationError("cannot average an empty set of embeddings");
  const Scheme scheme = embeddings.front().scheme();
  std::vector<double> v(embeddings.front().size(), 0.0);
  for (const auto& e : embeddings) {
    if (!(e.scheme() == scheme)) throw ValidationError("cannot average embeddings of different schemes");
    auto vals = e.values();
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += vals[j];
  }
  const double inv = 1.0 / static_cast<double>(embeddings.size());
  for (double& x : v) x *= inv;
  return Embedding(std::move(v), scheme);
}

PointMatrix EmbeddedDataset::as_points() const {
  std::vector<double> data;
  data.reserve(size() * dim());
  for (const auto& e : embeddings) data.insert(data.end(), e.values().begin(), e.values().end());
  return PointMatrix(dim(), std::move(data));
}

EmbeddedDataset embed_dataset(const FeatureModel& model, const LabeledDataset& dataset) {
  EmbeddedDataset out;
  out.scheme = scheme_of(model);
  out.ids.reserve(dataset.size());
  for (const auto& t : dataset.trajectories) out.ids.push_back(t.id());
  out.embeddings.resize(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t i) { out.embeddings[i] = mean_map(model, dataset.trajectories[i]); });
  return out;
}

std::vector<double> kernel_matrix(const EmbeddedDataset& embedded, bool normalized) {
  const std::size_t n = embedded.size();
  std::vector<double> k(n * n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i; j < n; ++j) {
      k[i * n + j] = distributional_kernel(embedded.embeddings[i], embedded.embeddings[j], normalized);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) k[i * n + j] = k[j * n + i];
  }
  return k;
}

}  // namespace trajkit
