#include "vn/polynomial.hpp"

#include <algorithm>
#include <numeric>

namespace vn {

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
  for (int c : components_) {
    if (c < 0) throw std::invalid_argument("multi-index components must be nonnegative");
  }
}

MultiIndex MultiIndex::Zero(std::size_t num_vars) {
  return MultiIndex(std::vector<int>(num_vars, 0));
}

MultiIndex MultiIndex::Unit(std::size_t num_vars, std::size_t k) {
  if (k >= num_vars) throw DimensionError("unit multi-index slot out of range");
  std::vector<int> c(num_vars, 0);
  c[k] = 1;
  return MultiIndex(std::move(c));
}

int MultiIndex::total_degree() const {
  return std::accumulate(components_.begin(), components_.end(), 0);
}

MatrixPolynomial::MatrixPolynomial(std::size_t num_vars, std::size_t coeff_dim)
    : num_vars_(num_vars), coeff_dim_(coeff_dim) {
  if (num_vars == 0) throw DimensionError("a polynomial needs at least one variable");
  if (coeff_dim == 0) throw DimensionError("coefficient dimension must be positive");
}

MatrixPolynomial& MatrixPolynomial::add_term(const MultiIndex& t, const ComplexMatrix& coeff) {
  if (t.size() != num_vars_) throw DimensionError("multi-index arity does not match num_vars");
  if (coeff.rows() != coeff_dim_ || coeff.cols() != coeff_dim_) {
    throw DimensionError("coefficient must be " + std::to_string(coeff_dim_) + "x" +
                         std::to_string(coeff_dim_));
  }
  auto it = terms_.find(t);
  if (it == terms_.end()) {
    if (!coeff.is_zero()) terms_.emplace(t, coeff);
    return *this;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
  return *this;
}

MatrixPolynomial& MatrixPolynomial::operator+=(const MatrixPolynomial& other) {
  if (other.num_vars_ != num_vars_ || other.coeff_dim_ != coeff_dim_) {
    throw DimensionError("polynomial sum shape mismatch");
  }
  for (const auto& [t, a] : other.terms_) add_term(t, a);
  return *this;
}

MatrixPolynomial& MatrixPolynomial::operator*=(Complex c) {
  if (c == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    // Underflow can zero a tiny coefficient.
    if (it->second.is_zero()) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial& b) { return a += b; }
MatrixPolynomial operator*(Complex c, MatrixPolynomial p) { return p *= c; }

int degree(const MatrixPolynomial& p) {
  if (p.is_zero()) throw DegenerateInput("degree of the zero polynomial");
  int m = 0;
  for (const auto& [t, a] : p.terms()) m = std::max(m, t.total_degree());
  return m;
}

bool is_homogeneous_linear(const MatrixPolynomial& p) {
  if (p.is_zero()) return false;
  return std::all_of(p.terms().begin(), p.terms().end(),
                     [](const auto& term) { return term.first.total_degree() == 1; });
}

ComplexMatrix eval_scalar(const MatrixPolynomial& p, std::span<const Complex> z) {
  if (z.size() != p.num_vars()) {
    throw DimensionError("point has " + std::to_string(z.size()) + " components, expected " +
                         std::to_string(p.num_vars()));
  }
  ComplexMatrix out(p.coeff_dim(), p.coeff_dim());
  for (const auto& [t, a] : p.terms()) {
    Complex mono = 1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      for (int e = 0; e < t[k]; ++e) mono *= z[k];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += mono * a.data()[i];
  }
  return out;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int e) {
  if (!m.is_square()) throw DimensionError("power of a non-square matrix");
  if (e < 0) throw std::invalid_argument("negative matrix power");
  ComplexMatrix result = ComplexMatrix::Identity(m.rows());
  ComplexMatrix base = m;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

ComplexMatrix eval_operators(const MatrixPolynomial& p, std::span<const ComplexMatrix> ops) {
  if (ops.size() != p.num_vars()) {
    throw DimensionError("tuple has " + std::to_string(ops.size()) + " operators, polynomial has " +
                         std::to_string(p.num_vars()) + " variables");
  }
  if (ops.empty() || !ops.front().is_square()) throw DimensionError("operators must be square");
  const std::size_t dim = ops.front().rows();
  for (const auto& op : ops) {
    if (!op.is_square() || op.rows() != dim) throw DimensionError("operators must share a dimension");
  }

  // Powers are cached per (variable, exponent); monomials multiply in
  // variable order 1..N.
  std::map<std::pair<std::size_t, int>, ComplexMatrix> powers;
  auto power = [&](std::size_t k, int e) -> const ComplexMatrix& {
    auto key = std::make_pair(k, e);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, matrix_power(ops[k], e)).first;
    return it->second;
  };

  const std::size_t n = p.coeff_dim();
  ComplexMatrix out(n * dim, n * dim);
  for (const auto& [t, a] : p.terms()) {
    ComplexMatrix mono = ComplexMatrix::Identity(dim);
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (t[k] > 0) mono = mono * power(k, t[k]);
    }
    out += kron(a, mono);
  }
  return out;
}

ComplexMatrix eval_tuple(const MatrixPolynomial& p, const ContractionTuple& tuple) {
  if (tuple.num_operators() != p.num_vars()) {
    throw DimensionError("tuple arity " + std::to_string(tuple.num_operators()) +
                         " does not match polynomial arity " + std::to_string(p.num_vars()));
  }
  require_valid(tuple);
  return eval_operators(p, tuple.operators());
}

MatrixPolynomial linear_pencil(std::span<const ComplexMatrix> coeffs) {
  if (coeffs.empty()) throw DimensionError("a pencil needs at least one coefficient");
  const std::size_t n = coeffs.front().rows();
  MatrixPolynomial p(coeffs.size(), n);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (!coeffs[k].is_square() || coeffs[k].rows() != n) {
      throw DimensionError("pencil coefficients must be square and of equal size");
    }
    p.add_term(MultiIndex::Unit(coeffs.size(), k), coeffs[k]);
  }
  if (p.is_zero()) throw DegenerateInput("all pencil coefficients are zero");
  return p;
}

}  // namespace vn
