#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "deft/matrix.hpp"

namespace deft {

/// Deterministic random source. Draws are reproducible bit-for-bit for a
/// given seed: uniforms come straight from mt19937_64 mantissa bits and
/// normals from an explicit Box-Muller, so no library-specific
/// distribution code is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline RealMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  RealMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

inline RealMatrix gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  return gaussian_matrix(rows, cols, rng);
}

/// Seeded matrix of exact rank r: product of two gaussian factors.
inline RealMatrix low_rank_matrix(int rows, int cols, int rank, std::uint64_t seed) {
  Rng rng(seed);
  RealMatrix a = gaussian_matrix(rows, rank, rng);
  RealMatrix b = gaussian_matrix(rank, cols, rng);
  return matmul(a, b);
}

}  // namespace deft
