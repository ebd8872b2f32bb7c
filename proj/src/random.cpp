#include "oil/random.hpp"

#include <cmath>
#include <random>

namespace oil {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = (base ^ index) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  }
  return g;
}

Matrix random_hermitian(int n, std::uint64_t seed) {
  const Matrix g = random_gaussian(n, n, seed);
  Matrix h = 0.5 * (g + g.adjoint());
  const double nrm = operator_norm(h);
  return nrm > 0.0 ? Matrix(h / nrm) : h;
}

}  // namespace oil
