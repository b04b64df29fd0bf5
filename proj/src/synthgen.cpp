#include "trajkit/synthgen.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "trajkit/error.hpp"
#include "trajkit/sampling.hpp"

namespace trajkit {

namespace {

constexpr std::uint64_t kStream = 0x73796e;

std::string index_id(std::size_t i) { return std::to_string(i); }

// Left half: whole sine periods, right half flat.
double wave(double x, double amplitude, double periods) {
  return x < 0.5 ? amplitude * std::sin(4.0 * std::numbers::pi * periods * x / 2.0) : 0.0;
}

}  // namespace

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::dense_sparse: return "dense-sparse-103";
    case GeneratorKind::translated_triple: return "translated-triple";
    case GeneratorKind::separable_singleton: return "separable-singleton";
    case GeneratorKind::cross_style: return "cross-style";
  }
  return "?";
}

GeneratorKind generator_from_string(const std::string& s) {
  if (s == "dense-sparse-103" || s == "dense-sparse") return GeneratorKind::dense_sparse;
  if (s == "translated-triple") return GeneratorKind::translated_triple;
  if (s == "separable-singleton") return GeneratorKind::separable_singleton;
  if (s == "cross-style" || s == "cross") return GeneratorKind::cross_style;
  throw ConfigError("unknown generator kind '" + s + "'");
}

LabeledDataset gen_dense_sparse(std::uint64_t seed, const DenseSparseLayout& L) {
  auto rng = stream_rng(seed, kStream);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Vertical position of each index on the right half, top to bottom.
  std::vector<double> base(103);
  double y = 0.0;
  for (std::size_t i = 0; i <= 50; ++i) {
    base[i] = y;
    y -= L.dense_spacing;
  }
  base[51] = base[50] - L.pair_gap;
  base[52] = base[51] - L.middle_gap;
  base[53] = base[52] - L.pair_gap;
  for (std::size_t i = 54; i < 103; ++i) base[i] = base[i - 1] - 10.0 * L.dense_spacing;

  LabeledDataset ds;
  ds.labels.emplace();
  if (L.points < 2) throw ParameterError("dense-sparse needs at least 2 points per trajectory");
  const double dx = 1.0 / static_cast<double>(L.points - 1);
  for (std::size_t i = 0; i < 103; ++i) {
    const bool anomalous = i == 40 || i == 51 || i == 52;
    const double amplitude = L.amplitude * (1.0 + 0.1 * u(rng));
    std::vector<double> coords;
    coords.reserve(2 * L.points);
    for (std::size_t j = 0; j < L.points; ++j) {
      double x = static_cast<double>(j) * dx;
      if (j > 0 && j + 1 < L.points) x += 0.25 * dx * u(rng);
      coords.push_back(x);
      coords.push_back(anomalous ? base[i] : base[i] + wave(x, amplitude, L.periods) + 0.05 * L.dense_spacing * u(rng));
    }
    ds.trajectories.emplace_back(index_id(i), 2, std::move(coords));
    (*ds.labels)[index_id(i)] = anomalous ? Label::anomalous : Label::normal;
  }
  return ds;
}

TranslatedTriple gen_translated_triple(std::uint64_t seed) {
  auto rng = stream_rng(seed, kStream + 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  const double shift = 0.1;
  const double step = 0.25 * shift;
  const std::vector<std::pair<double, double>> vertices = {{0.0, 0.0}, {0.25, 0.5}, {0.5, 0.0}, {0.75, 0.5}, {1.0, 0.0}};

  std::vector<double> xs;
  for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
    const auto [x0, y0] = vertices[v];
    const auto [x1, y1] = vertices[v + 1];
    const double len = std::hypot(x1 - x0, y1 - y0);
    const auto pieces = static_cast<std::size_t>(std::ceil(len / step));
    for (std::size_t k = 0; k < pieces; ++k) {
      const double f = static_cast<double>(k) / pieces;
      xs.push_back(x0 + f * (x1 - x0));
      xs.push_back(y0 + f * (y1 - y0));
    }
  }
  xs.push_back(vertices.back().first);
  xs.push_back(vertices.back().second);

  TranslatedTriple out;
  out.shift_y = shift;
  out.x = Trajectory("X", 2, xs);
  const double offset[2] = {out.shift_x, out.shift_y};
  out.x_prime = out.x.translated(offset);
  out.x_prime = Trajectory("X'", 2, out.x_prime.coords());

  // Clumps sit just beyond each end of the route, within half a shift of the
  // end points; the route itself is kept at every other point.
  const std::size_t m = out.x.size();
  const std::size_t clump = 3 * m;
  auto end_clump = [&](std::size_t end, std::size_t before, std::vector<double>& dst) {
    const auto e = out.x.point(end);
    const auto b = out.x.point(before);
    const double len = std::hypot(e[0] - b[0], e[1] - b[1]);
    const double ox = (e[0] - b[0]) / len, oy = (e[1] - b[1]) / len;
    for (std::size_t k = 0; k < clump; ++k) {
      const double along = 0.3 * shift + 0.05 * shift * u(rng);
      dst.push_back(e[0] + along * ox + 0.05 * shift * u(rng));
      dst.push_back(e[1] + along * oy + 0.05 * shift * u(rng));
    }
  };
  std::vector<double> ys;
  end_clump(0, 1, ys);
  for (std::size_t i = 0; i < m; i += 2) {
    ys.push_back(out.x.point(i)[0]);
    ys.push_back(out.x.point(i)[1]);
  }
  if ((m - 1) % 2 != 0) {
    ys.push_back(out.x.point(m - 1)[0]);
    ys.push_back(out.x.point(m - 1)[1]);
  }
  end_clump(m - 1, m - 2, ys);
  out.y = Trajectory("Y", 2, std::move(ys));
  return out;
}

LabeledDataset gen_separable_singleton(std::size_t n, std::uint64_t seed, double separation) {
  if (n < 2) throw ParameterError("separable-singleton needs n >= 2");
  auto rng = stream_rng(seed, kStream + 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  constexpr std::size_t len = 20;
  LabeledDataset ds;
  ds.labels.emplace();
  for (std::size_t i = 0; i < n; ++i) {
    const bool singleton = i + 1 == n;
    std::vector<double> coords;
    for (std::size_t j = 0; j < len; ++j) {
      const double x = static_cast<double>(j) / (len - 1);
      coords.push_back(x);
      coords.push_back(singleton ? separation : 0.1 * std::sin(3.0 * x) + 0.002 * u(rng));
    }
    ds.trajectories.emplace_back(index_id(i), 2, std::move(coords));
    (*ds.labels)[index_id(i)] = singleton ? Label::anomalous : Label::normal;
  }
  return ds;
}

LabeledDataset gen_cross_style(std::size_t n_traj, std::uint64_t seed, double anomaly_fraction) {
  if (n_traj < kCrossCorridors) throw ParameterError("cross-style needs at least 19 trajectories");
  if (!(anomaly_fraction >= 0.0 && anomaly_fraction < 1.0)) throw ParameterError("anomaly fraction must be in [0, 1)");
  auto rng = stream_rng(seed, kStream + 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> length(4, 30);

  const auto n_anomalies = static_cast<std::size_t>(std::llround(anomaly_fraction * static_cast<double>(n_traj)));
  std::vector<bool> anomalous(n_traj, false);
  for (auto i : sample_without_replacement(n_traj, n_anomalies, rng)) anomalous[i] = true;

  constexpr double step = 0.02;
  constexpr double noise = 0.004;
  LabeledDataset ds;
  ds.labels.emplace();
  ds.clusters.emplace();
  for (std::size_t i = 0; i < n_traj; ++i) {
    const std::size_t corridor = i % kCrossCorridors;
    const double angle = std::numbers::pi * (static_cast<double>(corridor) + 0.5) / kCrossCorridors;
    const double cx = 0.5 + 0.1 * std::cos(2.0 * angle);
    const double cy = 0.5 + 0.1 * std::sin(2.0 * angle);
    double dir_x = std::cos(angle), dir_y = std::sin(angle);
    const std::size_t len = length(rng);
    double start = -0.5 * step * static_cast<double>(len - 1) + 0.1 * u(rng);
    double ox = cx, oy = cy;
    if (anomalous[i]) {
      // Leaves the corridor at a steep angle from an offset origin.
      const double turn = 0.5 * std::numbers::pi + 0.3 * u(rng);
      const double ndx = dir_x * std::cos(turn) - dir_y * std::sin(turn);
      const double ndy = dir_x * std::sin(turn) + dir_y * std::cos(turn);
      ox = 0.5 + 0.35 * dir_y + 0.05 * u(rng);
      oy = 0.5 - 0.35 * dir_x + 0.05 * u(rng);
      dir_x = ndx;
      dir_y = ndy;
    }
    std::vector<double> coords;
    for (std::size_t j = 0; j < len; ++j) {
      const double s = start + step * static_cast<double>(j);
      coords.push_back(ox + s * dir_x + noise * u(rng));
      coords.push_back(oy + s * dir_y + noise * u(rng));
    }
    const std::string id = index_id(i);
    ds.trajectories.emplace_back(id, 2, std::move(coords));
    (*ds.labels)[id] = anomalous[i] ? Label::anomalous : Label::normal;
    (*ds.clusters)[id] = static_cast<int>(corridor) + 1;
  }
  return ds;
}

LabeledDataset generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::dense_sparse: return gen_dense_sparse(spec.seed);
    case GeneratorKind::translated_triple: {
      auto t = gen_translated_triple(spec.seed);
      LabeledDataset ds;
      ds.trajectories = {t.x, t.x_prime, t.y};
      return ds;
    }
    case GeneratorKind::separable_singleton: return gen_separable_singleton(spec.n ? spec.n : 20, spec.seed);
    case GeneratorKind::cross_style: return gen_cross_style(spec.n ? spec.n : 190, spec.seed);
  }
  throw ConfigError("unknown generator kind");
}

}  // namespace trajkit
