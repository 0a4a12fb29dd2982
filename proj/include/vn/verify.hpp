// The generalized von Neumann inequality ||P(T)|| <= max over the polydisk of
// ||P(z)||, and property suites for the regimes where it is a theorem.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vn/norms.hpp"
#include "vn/polynomial.hpp"
#include "vn/tuples.hpp"

namespace vn {

/// Grid points per dimension used when none is given, chosen so the scan
/// stays near two million points.
int default_grid_points(std::size_t num_vars);

// rhs is the certified upper bound of the polydisk sup, so holds == false
// can never come from underestimating the right side. rhs_estimate is the
// attained (refined) value, reported alongside.
struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double rhs_estimate = 0.0;
  double ratio_estimate = 0.0;
  bool holds = true;
  double tol = 0.0;
  int grid_points_per_dim = 0;
  std::string digest;
};

/// grid_points_per_dim == 0 selects default_grid_points(num_vars).
InequalityReport check_inequality(const MatrixPolynomial& p, const ContractionTuple& tuple,
                                  double tol, int grid_points_per_dim = 0, int workers = 1);

struct SuiteFailure {
  int trial = 0;
  std::uint64_t seed = 0;
  double ratio = 0.0;
  MatrixPolynomial polynomial;
  ContractionTuple tuple;
};

struct SuiteReport {
  std::string name;
  int trials = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int passed = 0;
  double max_ratio = 0.0;
  int worst_trial = -1;
  std::vector<SuiteFailure> failures;

  bool ok() const { return failures.empty() && passed == trials; }
};

/// Scalar affine functions a_0 + sum a_k z_k at random, not necessarily
/// commuting, contractions (N <= 4, dim <= 6).
SuiteReport scalar_affine_suite(int trials, std::uint64_t seed, double tol);

/// One contraction, matrix polynomials with n <= 3 and degree <= 5.
SuiteReport n1_suite(int trials, std::uint64_t seed, double tol);

/// Commuting pairs, matrix polynomials with n <= 2 and degree <= 3.
SuiteReport ando_suite(int trials, std::uint64_t seed, double tol);

/// Random matrix polynomial with every multi-index of total degree <= deg
/// present and entries uniform in [-1, 1]^2.
MatrixPolynomial random_matrix_polynomial(std::size_t num_vars, std::size_t coeff_dim, int deg,
                                          std::uint64_t seed);

}  // namespace vn
