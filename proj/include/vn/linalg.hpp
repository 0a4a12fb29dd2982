// Dense complex matrices, Kronecker products and operator norms.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vn {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Shapes of the operands do not fit the requested operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is mathematically valid but degenerate for the operation (zero
/// polynomial, zero pencil, empty matrix, non-unit vector, ...).
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Power iteration hit its iteration cap without meeting the convergence test.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(int iterations);
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

/// Row-major dense complex matrix. A default-constructed matrix is empty
/// (0 x 0); every other matrix has positive dimensions and finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix Identity(std::size_t n);
  static ComplexMatrix Zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix FromRows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<Complex> data() { return entries_; }
  std::span<const Complex> data() const { return entries_; }

  /// True when every entry is exactly zero.
  bool is_zero() const;
  bool all_finite() const;

  ComplexMatrix adjoint() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix-vector product.
ComplexVector apply(const ComplexMatrix& m, std::span<const Complex> v);

double vector_norm(std::span<const Complex> v);

/// Largest absolute entry difference; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product: block (i, j) of the result is a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Operator norm by power iteration on the Gram matrix m* m.
//
// The iteration runs on K = (m* m)^(2^s), normalised after every squaring,
// and tracks the Rayleigh quotient of the iterate against m* m itself. It
// stops once two successive Rayleigh quotients agree to `relative_tolerance`.
// When progress stalls (`stall_window` iterations without convergence) K is
// squared once more, which widens the spectral gap of the iteration matrix;
// once `max_squarings` is spent the iteration restarts from a seeded random
// vector, at most `max_restarts` times. Past `max_iterations` total
// iterations NonConvergence is thrown.
struct PowerIterationOptions {
  double relative_tolerance = 1e-14;
  int max_iterations = 20000;
  int stall_window = 64;
  int initial_squarings = 3;
  int max_squarings = 60;
  int max_restarts = 3;
  std::uint64_t restart_seed = 0x5eed0f7e57ULL;
};

struct SingularPair {
  double value = 0.0;
  ComplexVector right_vector;  // unit vector with ||m v|| == value
  int iterations = 0;
  int restarts = 0;
};

/// Reusable scratch space for repeated norm evaluations of same-shape
/// matrices. Not thread safe; keep one per worker.
class NormWorkspace {
 public:
  explicit NormWorkspace(PowerIterationOptions options = {}) : options_(options) {}

  /// Top singular value of the rows x cols row-major block `m`.
  double norm(std::span<const Complex> m, std::size_t rows, std::size_t cols);
  double norm(const ComplexMatrix& m) { return norm(m.data(), m.rows(), m.cols()); }

  SingularPair top_pair(const ComplexMatrix& m);

 private:
  double run(std::span<const Complex> m, std::size_t rows, std::size_t cols);

  PowerIterationOptions options_;
  std::vector<Complex> gram_;
  std::vector<Complex> iter_;
  std::vector<Complex> tmp_;
  std::vector<Complex> v_;
  std::vector<Complex> w_;
  std::vector<Complex> start_;
  int last_iterations_ = 0;
  int last_restarts_ = 0;
};

/// Largest singular value of a nonempty matrix.
double op_norm(const ComplexMatrix& m, const PowerIterationOptions& options = {});

/// Largest singular value together with a right singular vector attaining it.
SingularPair top_singular_pair(const ComplexMatrix& m, const PowerIterationOptions& options = {});

/// ||m v|| for a unit vector v. Never exceeds op_norm(m) (no iteration is
/// involved); this is the certificate-grade lower bound.
double lower_bound_norm(const ComplexMatrix& m, std::span<const Complex> v,
                        double unit_tolerance = 1e-12);

bool is_contraction(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// op_norm(ab - ba).
double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace vn
