// Commuting contraction tuples, centrally the Parrott triple.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "vn/linalg.hpp"

namespace vn {

/// A tuple failed validation where a valid one is required.
class InvalidTuple : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// N square operators of a common dimension. The tuple carries the
// tolerances it should be validated with; construction only checks shapes,
// validate() checks the contraction and commutativity bounds.
class ContractionTuple {
 public:
  static constexpr double kDefaultContractionTol = 1e-10;
  static constexpr double kDefaultCommutativityTol = 1e-10;
  /// Commutativity tolerance for tuples that are not required to commute.
  static constexpr double kNoCommutativity = std::numeric_limits<double>::infinity();

  explicit ContractionTuple(std::vector<ComplexMatrix> operators,
                            double contraction_tol = kDefaultContractionTol,
                            double commutativity_tol = kDefaultCommutativityTol);

  std::size_t num_operators() const { return operators_.size(); }
  std::size_t dim() const { return operators_.front().rows(); }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const ComplexMatrix& op(std::size_t k) const { return operators_.at(k); }
  double contraction_tol() const { return contraction_tol_; }
  double commutativity_tol() const { return commutativity_tol_; }

  /// Same operators multiplied by a common scalar.
  ContractionTuple scaled(Complex c) const;

 private:
  std::vector<ComplexMatrix> operators_;
  double contraction_tol_;
  double commutativity_tol_;
};

struct ValidationReport {
  struct PairCommutator {
    std::size_t first;
    std::size_t second;
    double norm;
  };

  bool accepted = false;
  std::vector<double> norms;
  std::vector<double> norm_margins;  // 1 - ||T_k||
  std::vector<PairCommutator> commutators;
  std::vector<std::string> failures;
};

ValidationReport validate(const ContractionTuple& tuple);

/// Throws InvalidTuple with the report's failures when validation rejects.
void require_valid(const ContractionTuple& tuple);

/// T_k = [[0, 0], [C_k, 0]] on C^d (+) C^d with C = (b1, b2, I_d).
ContractionTuple parrott_triple(const ComplexMatrix& b1, const ComplexMatrix& b2,
                                double unitary_tol = 1e-10);

/// ([[0, 1], [1, 0]], [[1, 0], [0, -1]]).
std::pair<ComplexMatrix, ComplexMatrix> pauli_pair();

/// T_k = p_k(S) / ||p_k(S)|| * (1 - 1e-6) for one seeded random S and seeded
/// random scalar polynomials p_k of degree at most 3.
ContractionTuple random_commuting_tuple(std::size_t n_vars, std::size_t dim, std::uint64_t seed);

/// Independent random contractions, not required to commute.
ContractionTuple random_contraction_tuple(std::size_t n_vars, std::size_t dim, std::uint64_t seed);

}  // namespace vn
