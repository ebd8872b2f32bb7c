// Seeded complex Gaussian ensembles. Every draw is a pure function of its
// seed, so experiments reproduce bit-for-bit on the same standard library.
#pragma once

#include "oil/hardy.hpp"

#include <cstdint>

namespace oil {

/// Seed of the index-th independent stream under base: splitmix64(base ^ index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Entries with independent N(0, 1/2) real and imaginary parts.
Matrix random_gaussian(int rows, int cols, std::uint64_t seed);

/// Gaussian Hermitian matrix normalised to unit operator norm.
Matrix random_hermitian(int n, std::uint64_t seed);

}  // namespace oil
