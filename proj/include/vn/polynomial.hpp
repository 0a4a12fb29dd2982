// Matrix-valued polynomials P(z) = sum_t A_t z^t and their evaluation at
// scalar points and at operator tuples.
#pragma once

#include <compare>
#include <map>
#include <span>
#include <vector>

#include "vn/linalg.hpp"
#include "vn/tuples.hpp"

namespace vn {

/// Exponent vector t in Z_+^N.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);

  static MultiIndex Zero(std::size_t num_vars);
  /// e_k: one in slot k, zero elsewhere.
  static MultiIndex Unit(std::size_t num_vars, std::size_t k);

  std::size_t size() const { return components_.size(); }
  int operator[](std::size_t k) const { return components_[k]; }
  const std::vector<int>& components() const { return components_; }
  int total_degree() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> components_;
};

// Canonical form: terms are ordered by multi-index and no stored
// coefficient is exactly zero, so the zero polynomial has no terms.
class MatrixPolynomial {
 public:
  using TermMap = std::map<MultiIndex, ComplexMatrix>;

  MatrixPolynomial(std::size_t num_vars, std::size_t coeff_dim);

  /// Adds coeff * z^t, merging with an existing term of the same index.
  MatrixPolynomial& add_term(const MultiIndex& t, const ComplexMatrix& coeff);

  std::size_t num_vars() const { return num_vars_; }
  std::size_t coeff_dim() const { return coeff_dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  MatrixPolynomial& operator+=(const MatrixPolynomial& other);
  MatrixPolynomial& operator*=(Complex c);

  friend bool operator==(const MatrixPolynomial&, const MatrixPolynomial&) = default;

 private:
  std::size_t num_vars_;
  std::size_t coeff_dim_;
  TermMap terms_;
};

MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial& b);
MatrixPolynomial operator*(Complex c, MatrixPolynomial p);

/// Max total degree over stored terms; DegenerateInput for the zero polynomial.
int degree(const MatrixPolynomial& p);
bool is_homogeneous_linear(const MatrixPolynomial& p);

/// sum_t A_t z^t at z in C^N.
ComplexMatrix eval_scalar(const MatrixPolynomial& p, std::span<const Complex> z);

/// P(T) = sum_t A_t (x) T^t with T^t = T_1^{t_1} ... T_N^{t_N}. The tuple is
/// validated first; InvalidTuple is thrown when it is rejected.
ComplexMatrix eval_tuple(const MatrixPolynomial& p, const ContractionTuple& tuple);

/// eval_tuple without validation, for arbitrary square operators.
ComplexMatrix eval_operators(const MatrixPolynomial& p, std::span<const ComplexMatrix> ops);

/// A_1 z_1 + ... + A_N z_N. Rejects an all-zero coefficient list.
MatrixPolynomial linear_pencil(std::span<const ComplexMatrix> coeffs);

/// m^e by repeated squaring.
ComplexMatrix matrix_power(const ComplexMatrix& m, int e);

}  // namespace vn
