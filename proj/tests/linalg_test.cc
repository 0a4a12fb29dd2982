#include "doctest.h"
#include "oracles.hpp"
#include "vn/linalg.hpp"
#include "vn/random.hpp"

using namespace vn;
using vn::testing::closed_form_norm_2x2;
using vn::testing::jacobi_norm;

TEST_CASE("kron of identities is the identity") {
  CHECK(kron(ComplexMatrix::Identity(2), ComplexMatrix::Identity(2)) == ComplexMatrix::Identity(4));
}

TEST_CASE("kron places the right factor in the upper-right block") {
  const auto shift = ComplexMatrix::FromRows({{0.0, 1.0}, {0.0, 0.0}});
  const ComplexMatrix k = kron(shift, ComplexMatrix::Identity(2));
  ComplexMatrix expected(4, 4);
  expected(0, 2) = 1.0;
  expected(1, 3) = 1.0;
  CHECK(k == expected);
}

TEST_CASE("kron is associative up to rounding") {
  Rng rng(3);
  const auto a = rng.matrix(2, 3), b = rng.matrix(2, 2), c = rng.matrix(3, 1);
  CHECK(max_abs_diff(kron(a, kron(b, c)), kron(kron(a, b), c)) < 1e-14);
}

TEST_CASE("kron rejects empty operands") {
  CHECK_THROWS_AS(kron(ComplexMatrix(), ComplexMatrix::Identity(2)), DimensionError);
}

TEST_CASE("op_norm basics") {
  CHECK(op_norm(ComplexMatrix::FromRows({{0.0, 2.0}, {0.0, 0.0}})) == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t n : {1u, 2u, 5u}) CHECK(op_norm(ComplexMatrix::Identity(n)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(op_norm(ComplexMatrix(3, 2)) == 0.0);
  CHECK_THROWS_AS(op_norm(ComplexMatrix()), DegenerateInput);
}

TEST_CASE("op_norm matches the closed-form 2x2 singular value") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const ComplexMatrix m = rng.matrix(2, 2);
    const double expected = closed_form_norm_2x2(m);
    CHECK(std::abs(op_norm(m) - expected) <= 1e-12 * std::max(1.0, expected));
  }
}

TEST_CASE("op_norm matches Jacobi on rectangular and larger matrices") {
  Rng rng(12);
  for (int i = 0; i < 40; ++i) {
    const auto r = static_cast<std::size_t>(rng.uniform_int(1, 7));
    const auto c = static_cast<std::size_t>(rng.uniform_int(1, 7));
    const ComplexMatrix m = rng.matrix(r, c);
    CHECK(op_norm(m) == doctest::Approx(jacobi_norm(m)).epsilon(1e-10));
  }
}

TEST_CASE("op_norm converges on nearly degenerate spectra") {
  // Singular values 1 and 1 - delta behind random unitaries.
  Rng rng(13);
  for (double delta : {1e-3, 1e-6, 1e-9, 1e-13, 0.0}) {
    const ComplexMatrix u = rng.unitary(3), w = rng.unitary(3);
    ComplexMatrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0 - delta;
    d(2, 2) = 0.3;
    // The Rayleigh test may stop anywhere inside the cluster [1 - delta, 1].
    const double value = op_norm(u * d * w);
    CHECK(value <= 1.0 + 1e-14);
    CHECK(value >= 1.0 - std::max(delta, 1e-13));
  }
}

TEST_CASE("op_norm signals NonConvergence when the cap is too small") {
  Rng rng(14);
  const ComplexMatrix u = rng.unitary(4), w = rng.unitary(4);
  ComplexMatrix d(4, 4);
  d(0, 0) = 1.0;
  d(1, 1) = 0.999;
  d(2, 2) = 0.5;
  d(3, 3) = 0.25;
  PowerIterationOptions opts;
  opts.initial_squarings = 0;
  opts.max_squarings = 0;
  opts.max_restarts = 0;
  opts.max_iterations = 5;
  CHECK_THROWS_AS(op_norm(u * d * w, opts), NonConvergence);
  try {
    op_norm(u * d * w, opts);
  } catch (const NonConvergence& e) {
    CHECK(e.iterations() == 5);
  }
}

TEST_CASE("lower_bound_norm") {
  const auto id = ComplexMatrix::Identity(2);
  const ComplexVector e1{1.0, 0.0};
  CHECK(lower_bound_norm(id, e1) == 1.0);
  const auto m = ComplexMatrix::FromRows({{0.0, 2.0}, {0.0, 0.0}});
  const ComplexVector e2{0.0, 1.0};
  CHECK(lower_bound_norm(m, e2) == 2.0);
  const ComplexVector not_unit{1.0, 1.0};
  CHECK_THROWS_AS(lower_bound_norm(m, not_unit), DegenerateInput);
  const ComplexVector zero{0.0, 0.0};
  CHECK_THROWS_AS(lower_bound_norm(m, zero), DegenerateInput);
}

TEST_CASE("top singular vector attains op_norm") {
  Rng rng(15);
  for (int i = 0; i < 30; ++i) {
    const ComplexMatrix m = rng.matrix(4, 3);
    const SingularPair pair = top_singular_pair(m);
    CHECK(lower_bound_norm(m, pair.right_vector) == doctest::Approx(op_norm(m)).epsilon(1e-10));
    CHECK(lower_bound_norm(m, pair.right_vector) == pair.value);
  }
}

TEST_CASE("is_unitary, is_contraction, commutator_norm") {
  CHECK(is_unitary(ComplexMatrix::Identity(2), 1e-12));
  CHECK_FALSE(is_unitary(Complex(0.5) * ComplexMatrix::Identity(2), 1e-12));
  const auto b1 = ComplexMatrix::FromRows({{0.0, 1.0}, {1.0, 0.0}});
  const auto b2 = ComplexMatrix::FromRows({{1.0, 0.0}, {0.0, -1.0}});
  CHECK(commutator_norm(b1, b2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(commutator_norm(b1, b1) == 0.0);
  CHECK_THROWS_AS(commutator_norm(b1, ComplexMatrix::Identity(3)), DimensionError);
  CHECK_THROWS_AS(is_unitary(ComplexMatrix(2, 3), 1e-12), DimensionError);

  Rng rng(16);
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix u = rng.unitary(4);
    CHECK(is_unitary(u, 1e-12));
    CHECK(is_contraction(Complex(0.5) * u, 1e-10));
    CHECK_FALSE(is_contraction(Complex(1.01) * u, 1e-10));
  }
}

TEST_CASE("matrix construction validates shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(0, 2), DimensionError);
  CHECK_THROWS(ComplexMatrix(1, 1, {Complex(std::nan(""), 0.0)}));
  CHECK_THROWS_AS(ComplexMatrix::Identity(2) * ComplexMatrix(3, 3), DimensionError);
}

// Properties over seeded random inputs.

TEST_CASE("property: op_norm is multiplicative over kron") {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const auto a = rng.matrix(rng.uniform_int(1, 4), rng.uniform_int(1, 4));
    const auto b = rng.matrix(rng.uniform_int(1, 4), rng.uniform_int(1, 4));
    CHECK(std::abs(op_norm(kron(a, b)) - op_norm(a) * op_norm(b)) < 1e-9);
  }
}

TEST_CASE("property: 2x2 kron norm equals the product of closed-form norms") {
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const auto a = rng.matrix(2, 2), b = rng.matrix(2, 2);
    CHECK(std::abs(op_norm(kron(a, b)) - closed_form_norm_2x2(a) * closed_form_norm_2x2(b)) < 1e-10);
  }
}

TEST_CASE("property: unitary invariance and homogeneity") {
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 5));
    const ComplexMatrix m = rng.matrix(n, n);
    const double base = op_norm(m);
    CHECK(std::abs(op_norm(rng.unitary(n) * m * rng.unitary(n)) - base) < 1e-9);
    const Complex c = 3.0 * rng.complex_in_square();
    CHECK(std::abs(op_norm(c * m) - std::abs(c) * base) < 1e-10 * std::max(1.0, std::abs(c) * base));
  }
}

TEST_CASE("property: lower_bound_norm never exceeds op_norm") {
  Rng rng(24);
  for (int i = 0; i < 100; ++i) {
    const ComplexMatrix m = rng.matrix(rng.uniform_int(1, 5), 3);
    ComplexVector v{rng.complex_in_square(), rng.complex_in_square(), rng.complex_in_square()};
    const double nv = vector_norm(v);
    for (auto& x : v) x /= nv;
    CHECK(lower_bound_norm(m, v) <= op_norm(m) + 1e-10);
  }
}
