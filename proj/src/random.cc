#include "vn/random.hpp"

#include <cmath>

namespace vn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int Rng::uniform_int(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

Complex Rng::complex_in_square() {
  const double re = uniform(-1.0, 1.0);
  const double im = uniform(-1.0, 1.0);
  return {re, im};
}

ComplexMatrix Rng::matrix(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& x : m.data()) x = complex_in_square();
  return m;
}

ComplexMatrix Rng::unitary(std::size_t n) {
  // Modified Gram-Schmidt over columns; a random square matrix is full rank
  // with probability one, redraw otherwise.
  for (;;) {
    ComplexMatrix q = matrix(n, n);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
      nrm = std::sqrt(nrm);
      if (nrm < 1e-8) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
    }
    if (ok) return q;
  }
}

}  // namespace vn
