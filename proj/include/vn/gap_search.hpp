// Search for coefficient triples (A_1, A_2, A_3) whose pencil violates the
// generalized von Neumann inequality on the Parrott triple, and the
// recomputable certificate that documents such a violation.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vn/norms.hpp"
#include "vn/polynomial.hpp"
#include "vn/tuples.hpp"

namespace vn {

inline constexpr const char* kCertificateSchema = "vn-gap-cert/1";

using CoefficientTriple = std::array<ComplexMatrix, 3>;

/// Certificate fields are inconsistent or fail a precondition.
class MalformedCertificate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Quantities recomputed from a certificate contradict it.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A_1 (x) B_1 + A_2 (x) B_2 + A_3 (x) I_d.
ComplexMatrix assemble_block(const CoefficientTriple& a, const ComplexMatrix& b1,
                             const ComplexMatrix& b2);

/// A_1 l_1 + A_2 l_2 + A_3 as a polynomial in two variables.
MatrixPolynomial affine_pencil(const CoefficientTriple& a);

/// A_1 z_1 + A_2 z_2 + A_3 z_3.
MatrixPolynomial homogeneous_pencil(const CoefficientTriple& a);

struct LhsResult {
  double value = 0.0;
  ComplexVector witness;
};

/// ||A_1 (x) B_1 + A_2 (x) B_2 + A_3 (x) I|| with a unit witness attaining it.
LhsResult lhs_norm(const CoefficientTriple& a, const ComplexMatrix& b1, const ComplexMatrix& b2);

/// max over T^2 of ||A_1 l_1 + A_2 l_2 + A_3||, with certified upper bound.
TorusSupResult rhs_norm(const CoefficientTriple& a, int grid_points_per_dim, bool refine = true,
                        int workers = 1);

/// lhs_norm / rhs_norm(...).best_value: the uncertified search objective.
double search_objective(const CoefficientTriple& a, const ComplexMatrix& b1,
                        const ComplexMatrix& b2, int grid_points_per_dim);

struct SearchOptions {
  static constexpr long kDefaultEvaluationsPerRestart = 200;

  int restarts = 200;
  std::uint64_t seed = 0;
  /// Maximum objective evaluations per coefficient size; 0 selects
  /// restarts * kDefaultEvaluationsPerRestart.
  long budget = 0;
  int grid = kSearchGridPoints;
  int fine_grid = kCertificationGridPoints;
  int workers = 1;
  double initial_step = 0.25;
  double min_step = 1e-6;

  long effective_budget() const {
    return budget > 0 ? budget : static_cast<long>(restarts) * kDefaultEvaluationsPerRestart;
  }
};

struct SearchAttempt {
  std::size_t n = 0;
  long evaluations = 0;
  int best_restart = -1;
  double best_objective = 0.0;
  double ratio_lower = 0.0;
  bool violation = false;
};

struct SearchMeta {
  int restarts = 0;
  long budget = 0;
  int grid = 0;
  std::vector<SearchAttempt> attempts;
  double wall_time_seconds = 0.0;
};

struct GapCertificate {
  std::size_t n = 0;
  CoefficientTriple a;
  ComplexMatrix b1;
  ComplexMatrix b2;
  ComplexVector witness;
  double lhs_lower = 0.0;
  TorusSupResult rhs;
  double ratio_lower = 0.0;
  bool violation = false;
  std::uint64_t seed = 0;
  SearchMeta meta;
};

/// Rescales `a` so the certified T^2 bound is 1, then recomputes both sides
/// from scratch: the right side on a `fine_grid`^2 grid, the left side as the
/// witness-based lower bound.
GapCertificate build_certificate(const CoefficientTriple& a, const ComplexMatrix& b1,
                                 const ComplexMatrix& b2, int fine_grid, int workers = 1);

/// Seeded random restarts, each followed by adaptive coordinate-wise ascent
/// on the real and imaginary parts of (A_1, A_2, A_3). Returns the
/// certificate of the best restart whether or not it is a violation.
GapCertificate search(std::size_t n, const std::pair<ComplexMatrix, ComplexMatrix>& b_pair,
                      const SearchOptions& options);

/// Runs search for n = first_n, first_n + 1, ..., last_n until a certified
/// violation appears; otherwise returns the best certificate found.
GapCertificate search_escalating(const std::pair<ComplexMatrix, ComplexMatrix>& b_pair,
                                 std::size_t first_n, std::size_t last_n,
                                 const SearchOptions& options);

enum class Verdict { kViolation, kNoViolation };

std::string to_string(Verdict v);

struct CertifiedVerdict {
  Verdict verdict = Verdict::kNoViolation;
  double lhs_lower = 0.0;
  TorusSupResult rhs;
  double ratio_lower = 0.0;
};

/// Recomputes both sides from the stored matrices and witness only; stored
/// results and search metadata are ignored.
CertifiedVerdict certify(const GapCertificate& cert, int fine_grid, int workers = 1);

struct Counterexample {
  ContractionTuple triple;
  MatrixPolynomial pencil;
  /// ||L(T)|| computed through eval_tuple.
  double pencil_norm = 0.0;
  /// Certified bound over T^2 (equal to the sup over T^3 and the polydisk).
  CertifiedVerdict verdict;
  /// Direct three-variable polydisk computation, reported for comparison.
  TorusSupResult polydisk;
  double ratio = 0.0;
};

/// Builds the Parrott triple and the pencil L from a violating certificate,
/// recomputes ||L(T)|| and the right side, and checks they agree with it.
Counterexample assemble_counterexample(const GapCertificate& cert, int polydisk_grid = 128,
                                       int workers = 1);

namespace detail {

/// search without the n >= 2 precondition (n = 1 is the scalar boundary case).
GapCertificate search_any_n(std::size_t n, const std::pair<ComplexMatrix, ComplexMatrix>& b_pair,
                            const SearchOptions& options);

}  // namespace detail

}  // namespace vn
