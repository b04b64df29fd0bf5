#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace trajkit {

// Deterministic generator for one independent stream (e.g. one partitioning) of a seed.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream);

// k distinct indices from [0, n) via Floyd's algorithm. Requires k <= n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, std::mt19937_64& rng);

}  // namespace trajkit
