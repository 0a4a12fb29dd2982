// Seeded, platform-stable random draws.
#pragma once

#include <cstdint>
#include <random>

#include "vn/linalg.hpp"

namespace vn {

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for stream `index` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// std::uniform_real_distribution is implementation defined, so the
// conversions from raw 64-bit draws are done here to keep every stream
// bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Real and imaginary parts uniform in [-1, 1].
  Complex complex_in_square();

  ComplexMatrix matrix(std::size_t rows, std::size_t cols);
  /// Haar-ish random unitary (Gram-Schmidt on a random square matrix).
  ComplexMatrix unitary(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace vn
