#include "vn/verify.hpp"

#include <functional>

#include "vn/random.hpp"
#include "vn/serialize.hpp"

namespace vn {

namespace {

void multi_indices(std::size_t num_vars, int max_degree, std::vector<int>& prefix,
                   std::vector<MultiIndex>& out) {
  if (prefix.size() == num_vars) {
    out.emplace_back(prefix);
    return;
  }
  int used = 0;
  for (int c : prefix) used += c;
  for (int e = 0; e + used <= max_degree; ++e) {
    prefix.push_back(e);
    multi_indices(num_vars, max_degree, prefix, out);
    prefix.pop_back();
  }
}

using TrialFn = std::function<std::pair<MatrixPolynomial, ContractionTuple>(std::uint64_t)>;

SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed, double tol,
                      const TrialFn& make_trial) {
  if (trials < 1) throw std::invalid_argument("a suite needs at least one trial");
  SuiteReport report;
  report.name = name;
  report.trials = trials;
  report.seed = seed;
  report.tol = tol;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    auto [p, t] = make_trial(trial_seed);
    const InequalityReport r = check_inequality(p, t, tol);
    if (r.ratio > report.max_ratio || report.worst_trial < 0) {
      report.max_ratio = r.ratio;
      report.worst_trial = i;
    }
    if (r.holds) {
      ++report.passed;
    } else {
      report.failures.push_back({i, trial_seed, r.ratio, std::move(p), std::move(t)});
    }
  }
  return report;
}

}  // namespace

int default_grid_points(std::size_t num_vars) {
  switch (num_vars) {
    case 1: return 512;
    case 2: return 128;
    case 3: return 128;
    case 4: return 32;
    default: return 8;
  }
}

InequalityReport check_inequality(const MatrixPolynomial& p, const ContractionTuple& tuple,
                                  double tol, int grid_points_per_dim, int workers) {
  if (p.is_zero()) throw DegenerateInput("inequality check of the zero polynomial");
  const int grid = grid_points_per_dim > 0 ? grid_points_per_dim : default_grid_points(p.num_vars());

  InequalityReport report;
  report.tol = tol;
  report.grid_points_per_dim = grid;
  const ComplexMatrix pt = eval_tuple(p, tuple);
  report.lhs = pt.is_zero() ? 0.0 : op_norm(pt);
  const TorusSupResult sup = polydisk_sup(p, grid, true, workers);
  report.rhs = sup.certified_upper;
  report.rhs_estimate = sup.best_value;
  report.ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
  report.ratio_estimate = report.rhs_estimate > 0.0 ? report.lhs / report.rhs_estimate : 0.0;
  report.holds = report.ratio <= 1.0 + tol;
  report.digest = digest_hex(instance_to_json(p, tuple));
  return report;
}

MatrixPolynomial random_matrix_polynomial(std::size_t num_vars, std::size_t coeff_dim, int deg,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<MultiIndex> indices;
  std::vector<int> prefix;
  multi_indices(num_vars, deg, prefix, indices);
  MatrixPolynomial p(num_vars, coeff_dim);
  for (const auto& t : indices) p.add_term(t, rng.matrix(coeff_dim, coeff_dim));
  return p;
}

SuiteReport scalar_affine_suite(int trials, std::uint64_t seed, double tol) {
  return run_suite("scalar-affine", trials, seed, tol, [](std::uint64_t s) {
    Rng rng(s);
    const auto num_vars = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto dim = static_cast<std::size_t>(rng.uniform_int(1, 6));
    MatrixPolynomial l(num_vars, 1);
    l.add_term(MultiIndex::Zero(num_vars), ComplexMatrix(1, 1, {rng.complex_in_square()}));
    for (std::size_t k = 0; k < num_vars; ++k) {
      l.add_term(MultiIndex::Unit(num_vars, k), ComplexMatrix(1, 1, {rng.complex_in_square()}));
    }
    return std::make_pair(std::move(l), random_contraction_tuple(num_vars, dim, derive_seed(s, 1)));
  });
}

SuiteReport n1_suite(int trials, std::uint64_t seed, double tol) {
  return run_suite("n1", trials, seed, tol, [](std::uint64_t s) {
    Rng rng(s);
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 3));
    const int deg = rng.uniform_int(0, 5);
    const auto dim = static_cast<std::size_t>(rng.uniform_int(1, 6));
    return std::make_pair(random_matrix_polynomial(1, n, deg, derive_seed(s, 2)),
                          random_contraction_tuple(1, dim, derive_seed(s, 1)));
  });
}

SuiteReport ando_suite(int trials, std::uint64_t seed, double tol) {
  return run_suite("ando", trials, seed, tol, [](std::uint64_t s) {
    Rng rng(s);
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 2));
    const int deg = rng.uniform_int(0, 3);
    const auto dim = static_cast<std::size_t>(rng.uniform_int(1, 6));
    return std::make_pair(random_matrix_polynomial(2, n, deg, derive_seed(s, 2)),
                          random_commuting_tuple(2, dim, derive_seed(s, 1)));
  });
}

}  // namespace vn
