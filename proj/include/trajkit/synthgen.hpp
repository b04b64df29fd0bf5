#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "trajkit/dataset.hpp"

namespace trajkit {

enum class GeneratorKind { dense_sparse, translated_triple, separable_singleton, cross_style };

const char* to_string(GeneratorKind k);
GeneratorKind generator_from_string(const std::string& s);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::dense_sparse;
  std::uint64_t seed = 0;
  std::size_t n = 0;  // trajectory count where the kind takes one (0 = kind default)
};

// Geometry of gen_dense_sparse in raw units; x runs over [0, 1].
struct DenseSparseLayout {
  std::size_t points = 60;        // per trajectory
  double dense_spacing = 0.004;   // sparse spacing is ten times this
  double amplitude = 0.04;        // wave amplitude on the left half
  double pair_gap = 0.02;         // #50 to #51 and #52 to #53
  double middle_gap = 0.06;       // #51 to #52
  double periods = 2.0;           // wave periods on the left half
};

// 103 trajectories indexed "0".."102" from top to bottom. Wavy normal
// families: a dense one (#0-#39, #41-#50) and a sparse one (#53-#102) with ten
// times the vertical spacing. #40, #51 and #52 are straight horizontal lines
// and the only anomalies. On the right half the gap between #50 and #51 equals
// the gap between #52 and #53.
LabeledDataset gen_dense_sparse(std::uint64_t seed, const DenseSparseLayout& layout = {});

// Indices of the three anomalies of gen_dense_sparse.
inline constexpr std::size_t kDenseSparseAnomalies[3] = {40, 51, 52};

struct TranslatedTriple {
  Trajectory x;        // zig-zag
  Trajectory x_prime;  // x shifted by `shift`
  Trajectory y;        // same route, different point distribution
  double shift_x = 0.0;
  double shift_y = 0.0;
};

// X is a zig-zag, X' = X shifted vertically; Y follows X's route with every
// other point but lingers just beyond both ends, so point matching puts it as
// close to X as X' is while its distribution differs.
TranslatedTriple gen_translated_triple(std::uint64_t seed);

// n - 1 near-identical trajectories plus one straight trajectory `separation`
// away, labelled anomalous. Requires n >= 2.
LabeledDataset gen_separable_singleton(std::size_t n, std::uint64_t seed, double separation = 1.0);

inline constexpr std::size_t kCrossCorridors = 19;

// Short trajectories (4 to 30 points) along 19 straight corridors through a
// common crossing region; cluster = corridor (1..19). A fraction of them leave
// the corridor and are labelled anomalous, keeping their source corridor as
// cluster. Requires n_traj >= 19.
LabeledDataset gen_cross_style(std::size_t n_traj, std::uint64_t seed, double anomaly_fraction = 0.02);

// Dispatches on spec.kind; the triple becomes a dataset with ids X, X', Y.
LabeledDataset generate(const GeneratorSpec& spec);

}  // namespace trajkit
