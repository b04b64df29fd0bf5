#include "trajkit/distances.hpp"

#include <algorithm>
#include <limits>

#include "trajkit/error.hpp"
#include "trajkit/parallel.hpp"

namespace trajkit {
namespace {

void check_pair(const Trajectory& x, const Trajectory& y) {
  if (x.empty() || y.empty()) throw ValidationError("distance between empty trajectories is undefined");
  if (x.dim() != y.dim()) throw ValidationError("trajectories have different dimensionality");
}

// max over points of x of the distance to the nearest point of y.
double directed_hausdorff(const Trajectory& x, const Trajectory& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < y.size(); ++j) {
      nearest = std::min(nearest, euclidean(x.point(i), y.point(j)));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace

const char* to_string(Measure m) {
  switch (m) {
    case Measure::dtw:
      return "dtw";
    case Measure::hausdorff:
      return "hausdorff";
    case Measure::frechet:
      return "frechet";
  }
  return "?";
}

Measure measure_from_string(const std::string& s) {
  if (s == "dtw") return Measure::dtw;
  if (s == "hausdorff") return Measure::hausdorff;
  if (s == "frechet") return Measure::frechet;
  throw ConfigError("unknown measure '" + s + "' (expected dtw, hausdorff or frechet)");
}

double dtw(const Trajectory& x, const Trajectory& y) {
  check_pair(x, y);
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(n + 1, inf);
  std::vector<double> cur(n + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = inf;
    const auto xi = x.point(i - 1);
    for (std::size_t j = 1; j <= n; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = euclidean(xi, y.point(j - 1)) + best;
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double hausdorff(const Trajectory& x, const Trajectory& y) {
  check_pair(x, y);
  return std::max(directed_hausdorff(x, y), directed_hausdorff(y, x));
}

double frechet_discrete(const Trajectory& x, const Trajectory& y) {
  check_pair(x, y);
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  std::vector<double> c(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = euclidean(x.point(i), y.point(j));
      double reach;
      if (i == 0 && j == 0) {
        reach = 0.0;
      } else if (i == 0) {
        reach = c[j - 1];
      } else if (j == 0) {
        reach = c[(i - 1) * n];
      } else {
        reach = std::min({c[(i - 1) * n + j], c[i * n + j - 1], c[(i - 1) * n + j - 1]});
      }
      c[i * n + j] = std::max(d, reach);
    }
  }
  return c[m * n - 1];
}

double distance(Measure m, const Trajectory& x, const Trajectory& y) {
  switch (m) {
    case Measure::dtw:
      return dtw(x, y);
    case Measure::hausdorff:
      return hausdorff(x, y);
    case Measure::frechet:
      return frechet_discrete(x, y);
  }
  throw ConfigError("unknown measure");
}

DistanceMatrix pairwise_matrix(const LabeledDataset& dataset, Measure measure) {
  const std::size_t n = dataset.size();
  DistanceMatrix out;
  out.measure = measure;
  out.values.assign(n * n, 0.0);
  for (const auto& t : dataset.trajectories) out.ids.push_back(t.id());
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.values[i * n + j] = distance(measure, dataset.trajectories[i], dataset.trajectories[j]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) out.values[i * n + j] = out.values[j * n + i];
  }
  return out;
}

}  // namespace trajkit
