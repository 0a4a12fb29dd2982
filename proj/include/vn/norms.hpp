// Sup-norms of matrix polynomials over the torus T^N (and hence over the
// closed polydisk), with a certified upper bound.
#pragma once

#include <string>
#include <vector>

#include "vn/polynomial.hpp"

namespace vn {

inline constexpr int kSearchGridPoints = 64;
inline constexpr int kCertificationGridPoints = 512;
inline constexpr int kMinGridPoints = 4;

/// A point of T^N given by its angles, each in [0, 2 pi).
struct TorusPoint {
  std::vector<double> angles;

  ComplexVector to_complex() const;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Wraps an angle into [0, 2 pi).
double wrap_angle(double theta);

// grid_max is the largest norm over the uniform angular grid; every point of
// the torus lies within grid_step / 2 of a grid point in each angle, and the
// norm moves by at most lipschitz_bound per radian (summed over angles), so
//   certified_upper = grid_max + grid_step / 2 * lipschitz_bound
// bounds the true supremum. best_value >= grid_max comes from the local
// refinement and is always a value attained at best_point.
struct TorusSupResult {
  double best_value = 0.0;
  TorusPoint best_point;
  double certified_upper = 0.0;
  double grid_max = 0.0;
  double grid_step = 0.0;
  double lipschitz_bound = 0.0;
  int grid_points_per_dim = 0;
  bool refined = false;
  std::string domain = "torus";
};

/// sum_k sum_t t_k ||A_t||: bound on the total angular derivative of P on T^N.
double torus_lipschitz_bound(const MatrixPolynomial& p);

/// Grid scan of ||P(lambda)|| over T^N, optionally refined by coordinate-wise
/// golden-section ascent from the best grid point. `workers` splits the scan;
/// the result does not depend on it (ties go to the lexicographically
/// smallest grid point).
TorusSupResult torus_sup(const MatrixPolynomial& p, int grid_points_per_dim, bool refine = true,
                         int workers = 1);

/// Supremum of ||P(z)|| over the closed polydisk, computed on its
/// distinguished boundary T^N by the maximum principle.
TorusSupResult polydisk_sup(const MatrixPolynomial& p, int grid_points_per_dim, bool refine = true,
                            int workers = 1);

/// A_1 z_1 + ... + A_N z_N  ->  A_1 l_1 + ... + A_{N-1} l_{N-1} + A_N, i.e.
/// the last variable is fixed to 1 (a common phase does not change norms).
MatrixPolynomial phase_reduction(const MatrixPolynomial& pencil);

}  // namespace vn
