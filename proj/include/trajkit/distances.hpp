#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trajkit/dataset.hpp"

namespace trajkit {

enum class Measure { dtw, hausdorff, frechet };

const char* to_string(Measure m);
Measure measure_from_string(const std::string& s);

// Point-to-point baselines with Euclidean ground cost. All throw
// ValidationError when either trajectory is empty or dimensions differ.

// Dynamic time warping: minimum accumulated cost over monotone warping paths
// with steps (1,0), (0,1), (1,1).
double dtw(const Trajectory& x, const Trajectory& y);

double hausdorff(const Trajectory& x, const Trajectory& y);

// Discrete Frechet: c(i,j) = max(|x_i - y_j|, min(c(i-1,j), c(i,j-1), c(i-1,j-1))).
double frechet_discrete(const Trajectory& x, const Trajectory& y);

double distance(Measure m, const Trajectory& x, const Trajectory& y);

struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row-major n x n
  Measure measure = Measure::dtw;

  std::size_t size() const noexcept { return ids.size(); }
  double operator()(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
};

// Upper triangle computed in parallel and mirrored; zero diagonal.
DistanceMatrix pairwise_matrix(const LabeledDataset& dataset, Measure measure);

}  // namespace trajkit
