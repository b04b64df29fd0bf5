#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trajkit/dataset.hpp"
#include "trajkit/feature.hpp"

namespace trajkit {

// Gaussian kernel k(x, y) = exp(-|x - y|^2 / (2 sigma^2)).
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma);

struct NystromParams {
  std::size_t components = 100;
  double sigma = 0.125;
  std::uint64_t seed = 0;
};

// Relative eigenvalue floor: directions of the landmark Gram matrix with
// eigenvalue below this fraction of the largest one are projected out.
inline constexpr double kEigenFloor = 1e-10;

// Finite-dimensional approximate feature map of the Gaussian kernel:
// z(x) = W^{-1/2} [k(x, l_1), ..., k(x, l_c)], with W the landmark Gram matrix.
class NystromModel {
 public:
  // Throws ParameterError if components == 0, sigma <= 0 or points.size() < components.
  static NystromModel fit(const PointMatrix& points, const NystromParams& params);
  // Rebuilds from stored landmarks and whitening (row-major c x c).
  static NystromModel from_parts(const NystromParams& params, PointMatrix landmarks,
                                 std::vector<double> whitening, std::size_t rank);

  std::size_t components() const noexcept { return params_.components; }
  double sigma() const noexcept { return params_.sigma; }
  std::uint64_t seed() const noexcept { return params_.seed; }
  std::size_t dim() const noexcept { return landmarks_.dim(); }
  const NystromParams& params() const noexcept { return params_; }
  Scheme scheme() const { return Scheme::nystrom(params_.components, params_.sigma); }

  const PointMatrix& landmarks() const noexcept { return landmarks_; }
  // Row-major c x c.
  const std::vector<double>& whitening() const noexcept { return whitening_; }
  // Number of eigen-directions kept after flooring.
  std::size_t rank() const noexcept { return rank_; }

  // Writes the c feature values of x into out. Throws ValidationError on dimension mismatch.
  void features(std::span<const double> x, std::span<double> out) const;

 private:
  NystromModel() = default;

  NystromParams params_;
  PointMatrix landmarks_;
  std::vector<double> whitening_;
  std::size_t rank_ = 0;
};

Embedding embed_point_g(const NystromModel& model, std::span<const double> x);

}  // namespace trajkit
