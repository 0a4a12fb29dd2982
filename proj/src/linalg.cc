#include "vn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "vn/random.hpp"

namespace vn {

NonConvergence::NonConvergence(int iterations)
    : std::runtime_error("power iteration did not converge after " +
                         std::to_string(iterations) + " iterations"),
      iterations_(iterations) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
  if (entries_.size() != rows * cols) {
    throw DimensionError("expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(entries_.size()));
  }
  if (!all_finite()) throw std::invalid_argument("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::Identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::FromRows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return {r, c, std::move(entries)};
}

bool ComplexMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Complex& x) { return x == Complex{}; });
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("matrix difference shape mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& x : entries_) x *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix m) { return m *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexVector apply(const ComplexMatrix& m, std::span<const Complex> v) {
  if (v.size() != m.cols()) throw DimensionError("vector length does not match matrix columns");
  ComplexVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double vector_norm(std::span<const Complex> v) {
  double sum = 0.0;
  for (const auto& x : v) sum += std::norm(x);
  return std::sqrt(sum);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.empty() || b.empty()) throw DimensionError("kron of an empty matrix");
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  }
  return out;
}

namespace {

// out = a * b for k x k row-major blocks.
void square_multiply(const std::vector<Complex>& a, const std::vector<Complex>& b,
                     std::vector<Complex>& out, std::size_t k) {
  std::fill(out.begin(), out.end(), Complex{});
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      const Complex ail = a[i * k + l];
      for (std::size_t j = 0; j < k; ++j) out[i * k + j] += ail * b[l * k + j];
    }
}

double max_diagonal(const std::vector<Complex>& m, std::size_t k) {
  double best = 0.0;
  for (std::size_t i = 0; i < k; ++i) best = std::max(best, m[i * k + i].real());
  return best;
}

void normalize(std::vector<Complex>& v) {
  const double n = vector_norm(v);
  for (auto& x : v) x /= n;
}

}  // namespace

double NormWorkspace::norm(std::span<const Complex> m, std::size_t rows, std::size_t cols) {
  return run(m, rows, cols);
}

SingularPair NormWorkspace::top_pair(const ComplexMatrix& m) {
  SingularPair out;
  out.value = run(m.data(), m.rows(), m.cols());
  out.right_vector = v_;
  out.iterations = last_iterations_;
  out.restarts = last_restarts_;
  return out;
}

double NormWorkspace::run(std::span<const Complex> m, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DegenerateInput("operator norm of an empty matrix");
  const std::size_t k = cols;
  last_iterations_ = 0;
  last_restarts_ = 0;

  // Deterministic start: all-ones plus a fixed perturbation.
  if (start_.size() != k) {
    start_.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double t = static_cast<double>(i);
      start_[i] = Complex(1.0 + 0.25 * std::sin(1.0 + t), 0.25 * std::cos(2.0 + 3.0 * t));
    }
    normalize(start_);
  }
  v_ = start_;

  auto image_norm = [&]() {
    double sum = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += m[i * k + j] * v_[j];
      sum += std::norm(acc);
    }
    return std::sqrt(sum);
  };

  if (k == 1) {
    v_[0] = 1.0;
    return image_norm();
  }

  gram_.assign(k * k, Complex{});
  for (std::size_t r = 0; r < rows; ++r) {
    const Complex* row = &m[r * k];
    for (std::size_t a = 0; a < k; ++a) {
      const Complex ca = std::conj(row[a]);
      if (ca == Complex{}) continue;
      for (std::size_t b = 0; b < k; ++b) gram_[a * k + b] += ca * row[b];
    }
  }
  const double scale = max_diagonal(gram_, k);
  if (scale == 0.0) return 0.0;
  for (auto& x : gram_) x /= scale;

  iter_ = gram_;
  tmp_.resize(k * k);
  int squarings = 0;
  auto square = [&]() {
    square_multiply(iter_, iter_, tmp_, k);
    const double d = max_diagonal(tmp_, k);
    for (auto& x : tmp_) x /= d;
    iter_.swap(tmp_);
    ++squarings;
  };
  for (int s = 0; s < options_.initial_squarings; ++s) square();

  // Seeding the generator is costly next to a small solve; do it on demand.
  std::optional<Rng> restart_rng;
  auto restart = [&]() {
    if (last_restarts_ >= options_.max_restarts) throw NonConvergence(last_iterations_);
    ++last_restarts_;
    if (!restart_rng) restart_rng.emplace(options_.restart_seed);
    for (auto& x : v_) x = restart_rng->complex_in_square();
    normalize(v_);
  };

  w_.resize(k);
  double rho_prev = -1.0;
  int window = 0;
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += iter_[i * k + j] * v_[j];
      w_[i] = acc;
    }
    const double nw = vector_norm(w_);
    ++last_iterations_;
    if (!(nw > 0.0) || !std::isfinite(nw)) {
      restart();
      rho_prev = -1.0;
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) v_[i] = w_[i] / nw;

    double rho = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += gram_[i * k + j] * v_[j];
      rho += (std::conj(v_[i]) * acc).real();
    }
    if (rho_prev >= 0.0 && std::abs(rho - rho_prev) <= options_.relative_tolerance * rho) break;
    rho_prev = rho;

    if (last_iterations_ >= options_.max_iterations) throw NonConvergence(last_iterations_);
    if (++window >= options_.stall_window) {
      window = 0;
      if (squarings < options_.max_squarings) {
        square();
      } else {
        restart();
        rho_prev = -1.0;
      }
    }
  }
  return image_norm();
}

double op_norm(const ComplexMatrix& m, const PowerIterationOptions& options) {
  NormWorkspace ws(options);
  return ws.norm(m);
}

SingularPair top_singular_pair(const ComplexMatrix& m, const PowerIterationOptions& options) {
  NormWorkspace ws(options);
  return ws.top_pair(m);
}

double lower_bound_norm(const ComplexMatrix& m, std::span<const Complex> v,
                        double unit_tolerance) {
  if (v.size() != m.cols()) throw DimensionError("witness length does not match matrix columns");
  const double nv = vector_norm(v);
  if (!(std::abs(nv - 1.0) <= unit_tolerance)) {
    throw DegenerateInput("witness is not a unit vector (norm " + std::to_string(nv) + ")");
  }
  return vector_norm(apply(m, v));
}

bool is_contraction(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("contraction test needs a square matrix");
  return op_norm(m) <= 1.0 + tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) throw DimensionError("unitarity test needs a square matrix");
  const ComplexMatrix defect = m.adjoint() * m - ComplexMatrix::Identity(m.rows());
  if (defect.is_zero()) return true;
  return op_norm(defect) <= tol;
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw DimensionError("commutator needs square matrices of equal size");
  }
  const ComplexMatrix c = a * b - b * a;
  if (c.is_zero()) return 0.0;
  return op_norm(c);
}

}  // namespace vn
