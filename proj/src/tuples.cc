#include "vn/tuples.hpp"

#include <cmath>
#include <sstream>

#include "vn/random.hpp"

namespace vn {

namespace {

constexpr double kRandomShrink = 1e-6;

}  // namespace

ContractionTuple::ContractionTuple(std::vector<ComplexMatrix> operators, double contraction_tol,
                                   double commutativity_tol)
    : operators_(std::move(operators)),
      contraction_tol_(contraction_tol),
      commutativity_tol_(commutativity_tol) {
  if (operators_.empty()) throw DimensionError("a tuple needs at least one operator");
  const std::size_t d = operators_.front().rows();
  for (const auto& op : operators_) {
    if (op.empty() || !op.is_square() || op.rows() != d) {
      throw DimensionError("tuple operators must be square and of equal dimension");
    }
  }
  if (!(contraction_tol >= 0.0) || !(commutativity_tol >= 0.0)) {
    throw std::invalid_argument("tuple tolerances must be nonnegative");
  }
}

ContractionTuple ContractionTuple::scaled(Complex c) const {
  std::vector<ComplexMatrix> ops = operators_;
  for (auto& op : ops) op *= c;
  return ContractionTuple(std::move(ops), contraction_tol_, commutativity_tol_);
}

ValidationReport validate(const ContractionTuple& tuple) {
  ValidationReport report;
  report.accepted = true;
  const auto& ops = tuple.operators();
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const double n = ops[k].is_zero() ? 0.0 : op_norm(ops[k]);
    report.norms.push_back(n);
    report.norm_margins.push_back(1.0 - n);
    if (n > 1.0 + tuple.contraction_tol()) {
      report.accepted = false;
      std::ostringstream msg;
      msg.precision(17);
      msg << "operator " << k << " has norm " << n << " > 1 + " << tuple.contraction_tol();
      report.failures.push_back(msg.str());
    }
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double c = commutator_norm(ops[i], ops[j]);
      report.commutators.push_back({i, j, c});
      if (c > tuple.commutativity_tol()) {
        report.accepted = false;
        std::ostringstream msg;
        msg.precision(17);
        msg << "operators " << i << " and " << j << " have commutator norm " << c << " > "
            << tuple.commutativity_tol();
        report.failures.push_back(msg.str());
      }
    }
  }
  return report;
}

void require_valid(const ContractionTuple& tuple) {
  const ValidationReport report = validate(tuple);
  if (report.accepted) return;
  std::string msg = "invalid tuple:";
  for (const auto& f : report.failures) msg += " " + f + ";";
  throw InvalidTuple(msg);
}

ContractionTuple parrott_triple(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                double unitary_tol) {
  if (b1.empty() || b2.empty() || !b1.is_square() || !b2.is_square() || b1.rows() != b2.rows()) {
    throw DimensionError("Parrott blocks must be square and of equal size");
  }
  const std::size_t d = b1.rows();
  if (d < 2) throw DimensionError("Parrott blocks need dimension at least 2");
  if (!is_unitary(b1, unitary_tol)) throw std::invalid_argument("b1 is not unitary");
  if (!is_unitary(b2, unitary_tol)) throw std::invalid_argument("b2 is not unitary");

  const ComplexMatrix identity = ComplexMatrix::Identity(d);
  std::vector<ComplexMatrix> ops;
  for (const ComplexMatrix* block : {&b1, &b2, &identity}) {
    ComplexMatrix t(2 * d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) t(d + i, j) = (*block)(i, j);
    ops.push_back(std::move(t));
  }
  // All pairwise products vanish exactly, so zero commutativity slack.
  return ContractionTuple(std::move(ops), ContractionTuple::kDefaultContractionTol, 0.0);
}

std::pair<ComplexMatrix, ComplexMatrix> pauli_pair() {
  return {ComplexMatrix::FromRows({{0.0, 1.0}, {1.0, 0.0}}),
          ComplexMatrix::FromRows({{1.0, 0.0}, {0.0, -1.0}})};
}

ContractionTuple random_commuting_tuple(std::size_t n_vars, std::size_t dim, std::uint64_t seed) {
  if (n_vars == 0 || dim == 0) throw DimensionError("random tuple needs n_vars >= 1 and dim >= 1");
  Rng rng(seed);
  const ComplexMatrix s = rng.matrix(dim, dim);
  const ComplexMatrix identity = ComplexMatrix::Identity(dim);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < n_vars; ++k) {
    const int degree = rng.uniform_int(0, 3);
    std::vector<Complex> coeffs(degree + 1);
    for (auto& c : coeffs) c = rng.complex_in_square();
    // Horner: p(S) = c0 + S (c1 + S (c2 + ...)).
    ComplexMatrix p = coeffs.back() * identity;
    for (int i = degree - 1; i >= 0; --i) p = s * p + coeffs[i] * identity;
    const double n = p.is_zero() ? 0.0 : op_norm(p);
    if (n == 0.0) {
      ops.push_back((1.0 - kRandomShrink) * identity);
    } else {
      ops.push_back(Complex((1.0 - kRandomShrink) / n) * p);
    }
  }
  return ContractionTuple(std::move(ops), ContractionTuple::kDefaultContractionTol, 1e-8);
}

ContractionTuple random_contraction_tuple(std::size_t n_vars, std::size_t dim, std::uint64_t seed) {
  if (n_vars == 0 || dim == 0) throw DimensionError("random tuple needs n_vars >= 1 and dim >= 1");
  Rng rng(seed);
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < n_vars; ++k) {
    // Mix of unitaries and strict contractions of random norm.
    if (rng.uniform() < 0.25) {
      ops.push_back(rng.unitary(dim));
      continue;
    }
    ComplexMatrix m = rng.matrix(dim, dim);
    const double target = rng.uniform(0.1, 1.0);
    m *= Complex(target / op_norm(m));
    ops.push_back(std::move(m));
  }
  return ContractionTuple(std::move(ops), ContractionTuple::kDefaultContractionTol,
                          ContractionTuple::kNoCommutativity);
}

}  // namespace vn
