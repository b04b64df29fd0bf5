#include "trajkit/nystrom.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "trajkit/error.hpp"
#include "trajkit/sampling.hpp"

namespace trajkit {

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
  return std::exp(-squared_euclidean(x, y) / (2.0 * sigma * sigma));
}

NystromModel NystromModel::fit(const PointMatrix& points, const NystromParams& params) {
  if (params.components == 0) throw ParameterError("number of Nystrom components must be >= 1");
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) throw ParameterError("sigma must be > 0");
  if (points.size() < params.components) {
    throw ParameterError("components=" + std::to_string(params.components) +
                         " exceeds the number of fitting points (" + std::to_string(points.size()) + ")");
  }
  const std::size_t c = params.components;
  auto rng = stream_rng(params.seed, 0x6e79);
  const auto picks = sample_without_replacement(points.size(), c, rng);
  std::vector<double> data;
  data.reserve(c * points.dim());
  for (auto i : picks) {
    auto row = points.row(i);
    data.insert(data.end(), row.begin(), row.end());
  }
  PointMatrix landmarks(points.dim(), std::move(data));

  Eigen::MatrixXd gram(c, c);
  for (std::size_t i = 0; i < c; ++i) {
    gram(i, i) = 1.0;
    for (std::size_t j = i + 1; j < c; ++j) {
      const double k = gaussian_kernel(landmarks.row(i), landmarks.row(j), params.sigma);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw ParameterError("eigendecomposition of landmark Gram matrix failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double floor = kEigenFloor * lambda.maxCoeff();
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(c);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < c; ++i) {
    if (lambda(i) > floor) {
      inv_sqrt(i) = 1.0 / std::sqrt(lambda(i));
      ++rank;
    }
  }
  const Eigen::MatrixXd& u = eig.eigenvectors();
  Eigen::MatrixXd w = u * inv_sqrt.asDiagonal() * u.transpose();
  w = 0.5 * (w + w.transpose());

  std::vector<double> whitening(c * c);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) whitening[i * c + j] = w(i, j);
  }
  return from_parts(params, std::move(landmarks), std::move(whitening), rank);
}

NystromModel NystromModel::from_parts(const NystromParams& params, PointMatrix landmarks,
                                     std::vector<double> whitening, std::size_t rank) {
  if (!(params.sigma > 0.0)) throw ParameterError("sigma must be > 0");
  if (landmarks.size() != params.components) throw ValidationError("landmark count differs from components");
  if (whitening.size() != params.components * params.components) {
    throw ValidationError("whitening matrix must be components x components");
  }
  NystromModel m;
  m.params_ = params;
  m.landmarks_ = std::move(landmarks);
  m.whitening_ = std::move(whitening);
  m.rank_ = rank;
  return m;
}

void NystromModel::features(std::span<const double> x, std::span<double> out) const {
  if (x.size() != landmarks_.dim()) {
    throw ValidationError("point has dimension " + std::to_string(x.size()) + ", model expects " +
                          std::to_string(landmarks_.dim()));
  }
  const std::size_t c = params_.components;
  thread_local std::vector<double> k;
  k.resize(c);
  for (std::size_t i = 0; i < c; ++i) k[i] = gaussian_kernel(x, landmarks_.row(i), params_.sigma);
  for (std::size_t i = 0; i < c; ++i) {
    const double* row = whitening_.data() + i * c;
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += row[j] * k[j];
    out[i] = s;
  }
}

Embedding embed_point_g(const NystromModel& model, std::span<const double> x) {
  std::vector<double> v(model.components());
  model.features(x, v);
  return Embedding(std::move(v), model.scheme());
}

}  // namespace trajkit
