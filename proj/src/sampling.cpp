#include "trajkit/sampling.hpp"

#include <unordered_set>

namespace trajkit {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::unordered_set<std::size_t> chosen;
  chosen.reserve(k * 2);
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t r = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (chosen.count(r)) r = j;
    chosen.insert(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace trajkit
