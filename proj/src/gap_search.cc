#include "vn/gap_search.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "vn/random.hpp"

namespace vn {

namespace {

void check_triple(const CoefficientTriple& a) {
  const std::size_t n = a[0].rows();
  for (const auto& m : a) {
    if (m.empty() || !m.is_square() || m.rows() != n) {
      throw DimensionError("coefficient triple must hold square matrices of equal size");
    }
  }
}

void check_b_pair(const ComplexMatrix& b1, const ComplexMatrix& b2) {
  if (b1.empty() || b2.empty() || !b1.is_square() || !b2.is_square() || b1.rows() != b2.rows()) {
    throw DimensionError("B pair must hold square matrices of equal size");
  }
  if (!is_unitary(b1, 1e-10) || !is_unitary(b2, 1e-10)) {
    throw std::invalid_argument("B pair must be unitary");
  }
}

CoefficientTriple unpack(std::span<const double> x, std::size_t n) {
  CoefficientTriple a{ComplexMatrix(n, n), ComplexMatrix(n, n), ComplexMatrix(n, n)};
  const std::size_t nn = n * n;
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t e = 0; e < nn; ++e) {
      a[k].data()[e] = Complex(x[2 * k * nn + e], x[(2 * k + 1) * nn + e]);
    }
  }
  return a;
}

bool all_zero(const CoefficientTriple& a) {
  return a[0].is_zero() && a[1].is_zero() && a[2].is_zero();
}

struct RestartOutcome {
  double objective = -1.0;
  std::vector<double> x;
  long evaluations = 0;
};

// Adaptive coordinate ascent: every coordinate keeps its own step, doubled
// after an accepted move and halved after a rejected one. Stops when every
// step is below min_step or the evaluation cap is spent.
RestartOutcome run_restart(std::size_t n, const ComplexMatrix& b1, const ComplexMatrix& b2,
                           const SearchOptions& options, std::uint64_t seed, long cap) {
  Rng rng(seed);
  const std::size_t dim = 6 * n * n;
  std::vector<double> x(dim);
  for (auto& xi : x) xi = rng.uniform(-1.0, 1.0);

  RestartOutcome out;
  auto f = [&](std::span<const double> p) {
    ++out.evaluations;
    return search_objective(unpack(p, n), b1, b2, options.grid);
  };

  double fx = f(x);
  std::vector<double> step(dim, options.initial_step);
  const double max_step = 4.0 * options.initial_step;
  std::vector<double> trial;
  bool active = true;
  while (active && out.evaluations < cap) {
    active = false;
    for (std::size_t i = 0; i < dim && out.evaluations < cap; ++i) {
      if (step[i] < options.min_step) continue;
      active = true;
      bool improved = false;
      for (double sign : {1.0, -1.0}) {
        if (out.evaluations >= cap) break;
        trial = x;
        trial[i] += sign * step[i];
        const double ft = f(trial);
        if (ft > fx) {
          x.swap(trial);
          fx = ft;
          improved = true;
          break;
        }
      }
      step[i] = improved ? std::min(2.0 * step[i], max_step) : 0.5 * step[i];
    }
    // The objective is scale invariant; keep the iterate at unit max-norm so
    // the steps stay meaningful.
    double biggest = 0.0;
    for (double xi : x) biggest = std::max(biggest, std::abs(xi));
    if (biggest > 0.0) {
      for (auto& xi : x) xi /= biggest;
    }
  }
  out.objective = fx;
  out.x = std::move(x);
  return out;
}

}  // namespace

ComplexMatrix assemble_block(const CoefficientTriple& a, const ComplexMatrix& b1,
                             const ComplexMatrix& b2) {
  check_triple(a);
  if (b1.rows() != b2.rows() || !b1.is_square() || !b2.is_square()) {
    throw DimensionError("B pair must hold square matrices of equal size");
  }
  ComplexMatrix m = kron(a[0], b1);
  m += kron(a[1], b2);
  m += kron(a[2], ComplexMatrix::Identity(b1.rows()));
  return m;
}

MatrixPolynomial affine_pencil(const CoefficientTriple& a) {
  check_triple(a);
  MatrixPolynomial p(2, a[0].rows());
  p.add_term(MultiIndex({1, 0}), a[0]);
  p.add_term(MultiIndex({0, 1}), a[1]);
  p.add_term(MultiIndex({0, 0}), a[2]);
  return p;
}

MatrixPolynomial homogeneous_pencil(const CoefficientTriple& a) {
  check_triple(a);
  return linear_pencil(a);
}

LhsResult lhs_norm(const CoefficientTriple& a, const ComplexMatrix& b1, const ComplexMatrix& b2) {
  check_b_pair(b1, b2);
  const ComplexMatrix m = assemble_block(a, b1, b2);
  SingularPair pair = top_singular_pair(m);
  return {pair.value, std::move(pair.right_vector)};
}

TorusSupResult rhs_norm(const CoefficientTriple& a, int grid_points_per_dim, bool refine,
                        int workers) {
  if (all_zero(a)) throw DegenerateInput("zero coefficient triple");
  return torus_sup(affine_pencil(a), grid_points_per_dim, refine, workers);
}

double search_objective(const CoefficientTriple& a, const ComplexMatrix& b1,
                        const ComplexMatrix& b2, int grid_points_per_dim) {
  if (all_zero(a)) return 0.0;
  const double lhs = op_norm(assemble_block(a, b1, b2));
  const double rhs = torus_sup(affine_pencil(a), grid_points_per_dim, true).best_value;
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

GapCertificate build_certificate(const CoefficientTriple& a, const ComplexMatrix& b1,
                                 const ComplexMatrix& b2, int fine_grid, int workers) {
  check_b_pair(b1, b2);
  GapCertificate cert;
  cert.n = a[0].rows();
  cert.b1 = b1;
  cert.b2 = b2;

  const TorusSupResult first = rhs_norm(a, fine_grid, true, workers);
  const Complex scale(1.0 / first.certified_upper);
  cert.a = a;
  for (auto& m : cert.a) m *= scale;

  cert.rhs = rhs_norm(cert.a, fine_grid, true, workers);
  const ComplexMatrix block = assemble_block(cert.a, b1, b2);
  cert.witness = top_singular_pair(block).right_vector;
  cert.lhs_lower = lower_bound_norm(block, cert.witness);
  cert.ratio_lower = cert.lhs_lower / cert.rhs.certified_upper;
  cert.violation = cert.lhs_lower > cert.rhs.certified_upper;
  return cert;
}

namespace detail {

GapCertificate search_any_n(std::size_t n, const std::pair<ComplexMatrix, ComplexMatrix>& b_pair,
                            const SearchOptions& options) {
  if (n == 0) throw std::invalid_argument("coefficient size must be positive");
  if (options.restarts < 1) throw std::invalid_argument("need at least one restart");
  const auto& [b1, b2] = b_pair;
  check_b_pair(b1, b2);
  const auto start = std::chrono::steady_clock::now();

  const long budget = options.effective_budget();
  const long cap = std::max<long>(1, budget / options.restarts);
  std::vector<RestartOutcome> outcomes(options.restarts);
  const int workers = std::clamp(options.workers, 1, options.restarts);
  auto work = [&](int w) {
    for (int r = w; r < options.restarts; r += workers) {
      outcomes[r] = run_restart(n, b1, b2, options,
                                derive_seed(derive_seed(options.seed, n), r), cap);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  // Lowest restart index wins ties.
  int best = 0;
  long evaluations = 0;
  for (int r = 0; r < options.restarts; ++r) {
    evaluations += outcomes[r].evaluations;
    if (outcomes[r].objective > outcomes[best].objective) best = r;
  }

  GapCertificate cert =
      build_certificate(unpack(outcomes[best].x, n), b1, b2, options.fine_grid, options.workers);
  cert.seed = options.seed;
  cert.meta.restarts = options.restarts;
  cert.meta.budget = budget;
  cert.meta.grid = options.grid;
  cert.meta.attempts.push_back({n, evaluations, best, outcomes[best].objective, cert.ratio_lower,
                                cert.violation});
  cert.meta.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

}  // namespace detail

GapCertificate search(std::size_t n, const std::pair<ComplexMatrix, ComplexMatrix>& b_pair,
                      const SearchOptions& options) {
  if (n < 2) throw std::invalid_argument("search needs coefficient size n >= 2");
  return detail::search_any_n(n, b_pair, options);
}

GapCertificate search_escalating(const std::pair<ComplexMatrix, ComplexMatrix>& b_pair,
                                 std::size_t first_n, std::size_t last_n,
                                 const SearchOptions& options) {
  if (first_n < 2 || last_n < first_n) throw std::invalid_argument("invalid escalation range");
  std::vector<SearchAttempt> attempts;
  double wall = 0.0;
  GapCertificate best;
  bool have_best = false;
  for (std::size_t n = first_n; n <= last_n; ++n) {
    GapCertificate cert = search(n, b_pair, options);
    attempts.push_back(cert.meta.attempts.front());
    wall += cert.meta.wall_time_seconds;
    if (!have_best || cert.ratio_lower > best.ratio_lower || cert.violation) {
      best = std::move(cert);
      have_best = true;
    }
    if (best.violation) break;
  }
  best.meta.attempts = std::move(attempts);
  best.meta.wall_time_seconds = wall;
  return best;
}

std::string to_string(Verdict v) {
  return v == Verdict::kViolation ? "VIOLATION" : "NO_VIOLATION";
}

CertifiedVerdict certify(const GapCertificate& cert, int fine_grid, int workers) {
  const std::size_t n = cert.a[0].rows();
  try {
    check_triple(cert.a);
  } catch (const std::exception& e) {
    throw MalformedCertificate(e.what());
  }
  if (cert.n != n) throw MalformedCertificate("stored n does not match the coefficient size");
  try {
    check_b_pair(cert.b1, cert.b2);
  } catch (const std::exception& e) {
    throw MalformedCertificate(e.what());
  }
  if (cert.witness.size() != n * cert.b1.rows()) {
    throw MalformedCertificate("witness length does not match n * d");
  }
  if (all_zero(cert.a)) throw MalformedCertificate("zero coefficient triple");

  CertifiedVerdict out;
  try {
    out.lhs_lower = lower_bound_norm(assemble_block(cert.a, cert.b1, cert.b2), cert.witness);
  } catch (const DegenerateInput& e) {
    throw MalformedCertificate(e.what());
  }
  out.rhs = rhs_norm(cert.a, fine_grid, true, workers);
  out.ratio_lower = out.lhs_lower / out.rhs.certified_upper;
  out.verdict = out.lhs_lower > out.rhs.certified_upper ? Verdict::kViolation
                                                        : Verdict::kNoViolation;
  return out;
}

Counterexample assemble_counterexample(const GapCertificate& cert, int polydisk_grid,
                                       int workers) {
  const CertifiedVerdict verdict = certify(cert, cert.rhs.grid_points_per_dim, workers);
  if (verdict.verdict != Verdict::kViolation) {
    throw std::invalid_argument("certificate does not certify a violation");
  }
  ContractionTuple triple = parrott_triple(cert.b1, cert.b2);
  MatrixPolynomial pencil = homogeneous_pencil(cert.a);
  const ComplexMatrix lt = eval_tuple(pencil, triple);
  const double pencil_norm = op_norm(lt);
  if (pencil_norm < verdict.lhs_lower - 1e-10) {
    throw InternalInconsistency("||L(T)|| = " + std::to_string(pencil_norm) +
                                " is below the certified lower bound " +
                                std::to_string(verdict.lhs_lower));
  }
  if (!(pencil_norm > verdict.rhs.certified_upper)) {
    throw InternalInconsistency("||L(T)|| does not exceed the certified polydisk bound");
  }
  TorusSupResult polydisk = polydisk_sup(pencil, polydisk_grid, true, workers);
  // The three-variable sup equals the phase-reduced one, so an attained value
  // above the certified bound means one of the two computations is wrong.
  if (polydisk.best_value > verdict.rhs.certified_upper + 1e-9) {
    throw InternalInconsistency("polydisk value " + std::to_string(polydisk.best_value) +
                                " exceeds the certified torus bound");
  }
  const double ratio = pencil_norm / verdict.rhs.certified_upper;
  return Counterexample{std::move(triple), std::move(pencil), pencil_norm, verdict,
                        std::move(polydisk), ratio};
}

}  // namespace vn
