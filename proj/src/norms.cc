#include "vn/norms.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace vn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRefineAngleTol = 1e-10;
constexpr double kGoldenWidthTol = 1e-11;
constexpr int kMaxRefineSweeps = 50;

struct Term {
  std::vector<int> exponents;
  std::vector<Complex> coeff;
};

// Evaluates ||P(lambda)|| without per-point allocation.
class NormEvaluator {
 public:
  explicit NormEvaluator(const MatrixPolynomial& p)
      : num_vars_(p.num_vars()), dim_(p.coeff_dim()), buffer_(dim_ * dim_) {
    for (const auto& [t, a] : p.terms()) {
      terms_.push_back({t.components(), std::vector<Complex>(a.data().begin(), a.data().end())});
    }
  }

  std::size_t num_vars() const { return num_vars_; }

  // Grid point given by indices j_k on a grid of g points per dimension;
  // roots[j] = exp(2 pi i j / g) makes every monomial an exact table lookup.
  double at_grid(std::span<const long> index, long g, std::span<const Complex> roots) {
    std::fill(buffer_.begin(), buffer_.end(), Complex{});
    for (const auto& term : terms_) {
      Complex mono = 1.0;
      for (std::size_t k = 0; k < num_vars_; ++k) {
        if (term.exponents[k] != 0) mono *= roots[(term.exponents[k] * index[k]) % g];
      }
      accumulate(term, mono);
    }
    return ws_.norm(buffer_, dim_, dim_);
  }

  double at_angles(std::span<const double> angles) {
    std::fill(buffer_.begin(), buffer_.end(), Complex{});
    for (const auto& term : terms_) {
      double phase = 0.0;
      for (std::size_t k = 0; k < num_vars_; ++k) phase += term.exponents[k] * angles[k];
      accumulate(term, std::polar(1.0, phase));
    }
    return ws_.norm(buffer_, dim_, dim_);
  }

 private:
  void accumulate(const Term& term, Complex mono) {
    for (std::size_t i = 0; i < buffer_.size(); ++i) buffer_[i] += mono * term.coeff[i];
  }

  std::size_t num_vars_;
  std::size_t dim_;
  std::vector<Term> terms_;
  std::vector<Complex> buffer_;
  NormWorkspace ws_;
};

struct ScanBest {
  double value = -1.0;
  std::vector<long> index;
};

// Scans the grid points whose first index lies in [first_begin, first_end)
// in lexicographic order, keeping the first maximum.
ScanBest scan_slab(const MatrixPolynomial& p, long g, long first_begin, long first_end,
                   std::span<const Complex> roots) {
  NormEvaluator eval(p);
  const std::size_t n = p.num_vars();
  std::vector<long> index(n, 0);
  index[0] = first_begin;
  ScanBest best;
  if (first_begin >= first_end) return best;
  for (;;) {
    const double v = eval.at_grid(index, g, roots);
    if (v > best.value) {
      best.value = v;
      best.index = index;
    }
    // Odometer increment, last coordinate fastest.
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++index[k] < (k == 0 ? first_end : g)) break;
      if (k == 0) return best;
      index[k] = 0;
    }
  }
}

double golden_section_max(NormEvaluator& eval, std::vector<double>& angles, std::size_t k,
                          double lo, double hi, double& best_value) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double theta) {
    const double saved = angles[k];
    angles[k] = theta;
    const double v = eval.at_angles(angles);
    angles[k] = saved;
    return v;
  };
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > kGoldenWidthTol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double theta = fc > fd ? c : d;
  const double value = std::max(fc, fd);
  if (value > best_value) {
    const double change = std::abs(theta - angles[k]);
    angles[k] = theta;
    best_value = value;
    return change;
  }
  return 0.0;
}

}  // namespace

ComplexVector TorusPoint::to_complex() const {
  ComplexVector z;
  z.reserve(angles.size());
  for (double a : angles) z.push_back(std::polar(1.0, a));
  return z;
}

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double torus_lipschitz_bound(const MatrixPolynomial& p) {
  double total = 0.0;
  for (const auto& [t, a] : p.terms()) {
    const int deg = t.total_degree();
    if (deg > 0) total += deg * op_norm(a);
  }
  return total;
}

TorusSupResult torus_sup(const MatrixPolynomial& p, int grid_points_per_dim, bool refine,
                         int workers) {
  if (p.is_zero()) throw DegenerateInput("sup-norm of the zero polynomial");
  if (grid_points_per_dim < kMinGridPoints) {
    throw std::invalid_argument("grid needs at least " + std::to_string(kMinGridPoints) +
                                " points per dimension");
  }
  const long g = grid_points_per_dim;
  const std::size_t n = p.num_vars();
  if (std::pow(static_cast<double>(g), static_cast<double>(n)) > 1e10) {
    throw std::invalid_argument("grid of " + std::to_string(g) + "^" + std::to_string(n) +
                                " points is too large");
  }

  std::vector<Complex> roots(g);
  for (long j = 0; j < g; ++j) roots[j] = std::polar(1.0, kTwoPi * static_cast<double>(j) / g);

  ScanBest best;
  const long slabs = std::clamp<long>(workers, 1, g);
  if (slabs == 1) {
    best = scan_slab(p, g, 0, g, roots);
  } else {
    std::vector<ScanBest> partial(slabs);
    std::vector<std::thread> threads;
    for (long s = 0; s < slabs; ++s) {
      const long begin = g * s / slabs;
      const long end = g * (s + 1) / slabs;
      threads.emplace_back(
          [&, s, begin, end] { partial[s] = scan_slab(p, g, begin, end, roots); });
    }
    for (auto& t : threads) t.join();
    for (auto& part : partial) {
      if (part.value > best.value) best = std::move(part);
    }
  }

  TorusSupResult result;
  result.grid_points_per_dim = grid_points_per_dim;
  result.grid_step = kTwoPi / static_cast<double>(g);
  result.grid_max = best.value;
  result.lipschitz_bound = torus_lipschitz_bound(p);
  result.certified_upper = result.grid_max + 0.5 * result.grid_step * result.lipschitz_bound;
  result.best_value = best.value;
  result.best_point.angles.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.best_point.angles[k] = kTwoPi * static_cast<double>(best.index[k]) / g;
  }

  if (refine && result.lipschitz_bound > 0.0) {
    NormEvaluator eval(p);
    std::vector<double> angles = result.best_point.angles;
    double value = eval.at_angles(angles);
    for (int sweep = 0; sweep < kMaxRefineSweeps; ++sweep) {
      double change = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        change = std::max(change, golden_section_max(eval, angles, k, angles[k] - result.grid_step,
                                                     angles[k] + result.grid_step, value));
      }
      if (change < kRefineAngleTol) break;
    }
    for (auto& a : angles) a = wrap_angle(a);
    const double wrapped_value = eval.at_angles(angles);
    if (wrapped_value > result.best_value) {
      result.best_value = wrapped_value;
      result.best_point.angles = std::move(angles);
    }
    result.refined = true;
  }
  return result;
}

TorusSupResult polydisk_sup(const MatrixPolynomial& p, int grid_points_per_dim, bool refine,
                            int workers) {
  TorusSupResult r = torus_sup(p, grid_points_per_dim, refine, workers);
  r.domain = "polydisk (maximum principle: attained on the torus)";
  return r;
}

MatrixPolynomial phase_reduction(const MatrixPolynomial& pencil) {
  if (!is_homogeneous_linear(pencil)) {
    throw std::invalid_argument("phase reduction needs a homogeneous linear pencil");
  }
  const std::size_t n = pencil.num_vars();
  if (n < 2) throw DimensionError("phase reduction needs at least two variables");
  MatrixPolynomial reduced(n - 1, pencil.coeff_dim());
  for (const auto& [t, a] : pencil.terms()) {
    if (t[n - 1] == 1) {
      reduced.add_term(MultiIndex::Zero(n - 1), a);
    } else {
      std::vector<int> c(t.components().begin(), t.components().end() - 1);
      reduced.add_term(MultiIndex(std::move(c)), a);
    }
  }
  return reduced;
}

}  // namespace vn
