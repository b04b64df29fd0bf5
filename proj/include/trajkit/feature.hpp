#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trajkit {

enum class SchemeKind { isolation, nystrom };

// Identifies the feature space an embedding lives in. Embeddings are only
// comparable when their schemes are equal.
struct Scheme {
  SchemeKind kind = SchemeKind::isolation;
  std::size_t size = 0;  // psi for isolation, number of landmarks for nystrom
  std::size_t t = 0;     // partitionings (isolation only)
  double sigma = 0.0;    // bandwidth (nystrom only)

  static Scheme isolation(std::size_t psi, std::size_t t) { return {SchemeKind::isolation, psi, t, 0.0}; }
  static Scheme nystrom(std::size_t c, double sigma) { return {SchemeKind::nystrom, c, 0, sigma}; }

  std::size_t dim() const noexcept { return kind == SchemeKind::isolation ? size * t : size; }
  std::string describe() const;
  bool operator==(const Scheme&) const = default;
};

// A dense feature vector: a point map phi(x) or a mean map Phi(P_X).
class Embedding {
 public:
  Embedding() = default;
  // Throws ValidationError if a value is non-finite or the length disagrees with the scheme.
  Embedding(std::vector<double> values, Scheme scheme);

  std::span<const double> values() const noexcept { return values_; }
  const Scheme& scheme() const noexcept { return scheme_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  // Euclidean norm, computed once at construction.
  double norm() const noexcept { return norm_; }

  bool operator==(const Embedding& o) const { return scheme_ == o.scheme_ && values_ == o.values_; }

 private:
  std::vector<double> values_;
  Scheme scheme_;
  double norm_ = 0.0;
};

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace trajkit
