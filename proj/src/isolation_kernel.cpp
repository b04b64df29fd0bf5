#include "trajkit/isolation_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <unordered_map>

#include "trajkit/error.hpp"
#include "trajkit/parallel.hpp"
#include "trajkit/sampling.hpp"

namespace trajkit {
namespace {

// Inputs up to this dimension use the per-partitioning dimension-major layout.
constexpr std::size_t kLocalLayoutMaxDim = 8;

}  // namespace

const char* to_string(CellRule rule) { return rule == CellRule::voronoi ? "voronoi" : "hypersphere"; }

CellRule cell_rule_from_string(const std::string& s) {
  if (s == "voronoi") return CellRule::voronoi;
  if (s == "hypersphere") return CellRule::hypersphere;
  throw ConfigError("unknown cell rule '" + s + "' (expected voronoi or hypersphere)");
}

std::size_t tie_break_nearest(std::span<const double> distances) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < distances.size(); ++j) {
    if (distances[j] < distances[best]) best = j;
  }
  return best;
}

PartitioningModel PartitioningModel::fit(const PointMatrix& points, const IsolationParams& params) {
  if (params.psi == 0) throw ParameterError("psi must be >= 1");
  if (params.t == 0) throw ParameterError("t must be >= 1");
  if (points.size() < params.psi) {
    throw ParameterError("psi=" + std::to_string(params.psi) + " exceeds the number of fitting points (" +
                         std::to_string(points.size()) + ")");
  }
  std::vector<std::vector<std::size_t>> samples(params.t);
  parallel_for(params.t, [&](std::size_t p) {
    auto rng = stream_rng(params.seed, p);
    samples[p] = sample_without_replacement(points.size(), params.psi, rng);
  });

  PartitioningModel m;
  m.params_ = params;
  std::unordered_map<std::size_t, std::uint32_t> pool_slot;
  std::vector<double> pool_data;
  m.anchor_index_.reserve(params.psi * params.t);
  for (const auto& sample : samples) {
    for (std::size_t src : sample) {
      auto [it, fresh] = pool_slot.try_emplace(src, static_cast<std::uint32_t>(pool_slot.size()));
      if (fresh) {
        auto row = points.row(src);
        pool_data.insert(pool_data.end(), row.begin(), row.end());
      }
      m.anchor_index_.push_back(it->second);
    }
  }
  m.pool_ = PointMatrix(points.dim(), std::move(pool_data));
  m.build_caches();
  return m;
}

PartitioningModel PartitioningModel::from_anchors(const IsolationParams& params, PointMatrix pool,
                                                  std::vector<std::uint32_t> anchor_index) {
  if (params.psi == 0 || params.t == 0) throw ParameterError("psi and t must be >= 1");
  if (anchor_index.size() != params.psi * params.t) {
    throw ValidationError("anchor index must have psi * t entries");
  }
  for (auto i : anchor_index) {
    if (i >= pool.size()) throw ValidationError("anchor index out of range");
  }
  PartitioningModel m;
  m.params_ = params;
  m.pool_ = std::move(pool);
  m.anchor_index_ = std::move(anchor_index);
  m.build_caches();
  return m;
}

void PartitioningModel::build_caches() {
  const std::size_t psi = params_.psi;
  const std::size_t t = params_.t;
  const std::size_t d = pool_.dim();
  feature_value_ = 1.0 / std::sqrt(static_cast<double>(t));

  local_.clear();
  if (d <= kLocalLayoutMaxDim) {
    local_.resize(t * d * psi);
    for (std::size_t p = 0; p < t; ++p) {
      for (std::size_t j = 0; j < psi; ++j) {
        auto a = anchor(p, j);
        for (std::size_t k = 0; k < d; ++k) local_[(p * d + k) * psi + j] = a[k];
      }
    }
  }

  radius2_.assign(psi * t, std::numeric_limits<double>::infinity());
  if (params_.rule != CellRule::hypersphere || psi == 1) return;

  const std::size_t u = pool_.size();
  if (u * u <= psi * psi * t) {
    // Few distinct anchors (e.g. a small embedded set): share one distance table.
    std::vector<double> table(u * u, 0.0);
    parallel_for(u, [&](std::size_t a) {
      for (std::size_t b = 0; b < u; ++b) table[a * u + b] = squared_euclidean(pool_.row(a), pool_.row(b));
    });
    for (std::size_t p = 0; p < t; ++p) {
      for (std::size_t j = 0; j < psi; ++j) {
        double best = std::numeric_limits<double>::infinity();
        const std::size_t aj = anchor_index_[p * psi + j];
        for (std::size_t k = 0; k < psi; ++k) {
          if (k != j) best = std::min(best, table[aj * u + anchor_index_[p * psi + k]]);
        }
        radius2_[p * psi + j] = best;
      }
    }
    return;
  }
  parallel_for(t, [&](std::size_t p) {
    for (std::size_t j = 0; j < psi; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < psi; ++k) {
        if (k != j) best = std::min(best, squared_euclidean(anchor(p, j), anchor(p, k)));
      }
      radius2_[p * psi + j] = best;
    }
  });
}

void PartitioningModel::assign(std::span<const double> x, std::span<std::int32_t> cells) const {
  const std::size_t psi = params_.psi;
  const std::size_t t = params_.t;
  const std::size_t d = pool_.dim();
  if (x.size() != d) {
    throw ValidationError("point has dimension " + std::to_string(x.size()) + ", model expects " +
                          std::to_string(d));
  }
  if (cells.size() != t) throw ValidationError("cell buffer must have t entries");
  const bool spheres = params_.rule == CellRule::hypersphere;

  if (!local_.empty()) {
    auto scan = [&](auto dim) {
      const std::size_t dd = dim;
      for (std::size_t p = 0; p < t; ++p) {
        const double* base = local_.data() + p * dd * psi;
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < psi; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < dd; ++k) {
            const double diff = x[k] - base[k * psi + j];
            s += diff * diff;
          }
          if (s < best_d) {
            best_d = s;
            best = j;
          }
        }
        cells[p] = spheres && best_d > radius2_[p * psi + best] ? kUncovered : static_cast<std::int32_t>(best);
      }
    };
    if (d == 2) {
      scan(std::integral_constant<std::size_t, 2>{});
    } else {
      scan(d);
    }
    return;
  }

  // High-dimensional inputs: distances to each distinct anchor are computed once.
  const std::size_t u = pool_.size();
  thread_local std::vector<double> dist;
  dist.resize(u);
  for (std::size_t a = 0; a < u; ++a) dist[a] = squared_euclidean(x, pool_.row(a));
  for (std::size_t p = 0; p < t; ++p) {
    const std::uint32_t* idx = anchor_index_.data() + p * psi;
    std::size_t best = 0;
    for (std::size_t j = 1; j < psi; ++j) {
      if (dist[idx[j]] < dist[idx[best]]) best = j;
    }
    cells[p] = spheres && dist[idx[best]] > radius2_[p * psi + best] ? kUncovered
                                                                     : static_cast<std::int32_t>(best);
  }
}

std::vector<std::int32_t> PartitioningModel::assign(std::span<const double> x) const {
  std::vector<std::int32_t> cells(params_.t);
  assign(x, cells);
  return cells;
}

Embedding embed_point(const PartitioningModel& model, std::span<const double> x) {
  const auto cells = model.assign(x);
  std::vector<double> v(model.feature_dim(), 0.0);
  for (std::size_t p = 0; p < cells.size(); ++p) {
    if (cells[p] != kUncovered) v[p * model.psi() + cells[p]] = model.feature_value();
  }
  return Embedding(std::move(v), model.scheme());
}

double point_kernel(const PartitioningModel& model, std::span<const double> x, std::span<const double> y) {
  const auto cx = model.assign(x);
  const auto cy = model.assign(y);
  std::size_t shared = 0;
  for (std::size_t p = 0; p < cx.size(); ++p) {
    if (cx[p] != kUncovered && cx[p] == cy[p]) ++shared;
  }
  return static_cast<double>(shared) / static_cast<double>(model.t());
}

}  // namespace trajkit
