#include "quasistar/algebra.hpp"

#include <doctest.h>

using namespace quasistar;
using namespace quasistar::algebra;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("matrix units multiply like E_ij E_kl = delta_jk E_il") {
  const auto a = matrix_algebra(2);
  REQUIRE(a.dim() == 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const auto p = a.multiply(a.basis(matrix_unit(2, i, j)), a.basis(matrix_unit(2, k, l)));
          Vector expected = Vector::Zero(4);
          if (j == k) expected(matrix_unit(2, i, l)) = 1.0;
          CHECK((p.coeffs() - expected).norm() == doctest::Approx(0.0));
        }
  CHECK(a.associativity_residual() < 1e-14);
  CHECK(a.involution_residual() < 1e-14);
  CHECK(a.unit_residual() < 1e-14);
}

TEST_CASE("product and involution agree with dense matrices") {
  const auto a = matrix_algebra(2);
  const Matrix x = mat2({1, 2}, {0, -1}, 3, {0.5, 0.5});
  const Matrix y = mat2(-2, {1, 1}, {0, 4}, 1);
  const auto p = a.multiply(from_matrix(a, x), from_matrix(a, y));
  CHECK((to_matrix(p, 2) - x * y).norm() < 1e-14);
  CHECK((to_matrix(a.star(from_matrix(a, x)), 2) - x.adjoint()).norm() < 1e-14);
}

TEST_CASE("complex numbers and cyclic group algebras") {
  const auto c = complex_numbers();
  CHECK(c.dim() == 1);
  CHECK(c.unit().coeffs()(0) == Complex(1.0));

  const auto z3 = cyclic_group_algebra(3);
  const auto g = z3.basis(1);
  const auto g3 = z3.multiply(z3.multiply(g, g), g);
  CHECK((g3.coeffs() - z3.unit().coeffs()).norm() < 1e-15);
  CHECK((z3.star(g).coeffs() - z3.basis(2).coeffs()).norm() < 1e-15);
}

TEST_CASE("states evaluate as expected") {
  const auto a = matrix_algebra(2);
  const auto tr = normalized_trace(a, 2);
  CHECK(tr.normalized());
  CHECK(std::abs(tr(a.unit()) - 1.0) < 1e-15);
  CHECK(std::abs(tr(a.basis(matrix_unit(2, 0, 0))) - 0.5) < 1e-15);

  const auto pure = first_entry_state(a, 2);
  CHECK(std::abs(pure(a.basis(matrix_unit(2, 1, 1)))) < 1e-15);

  // Gram of tr/2 on matrix units is I/2.
  const Matrix g = gram_matrix(a, tr.functional());
  CHECK((g - 0.5 * Matrix::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("density state reproduces tr(rho A)") {
  const auto a = matrix_algebra(2);
  const Matrix rho = mat2(0.7, {0.1, 0.2}, {0.1, -0.2}, 0.3);
  const auto omega = density_state(a, rho);
  const Matrix x = mat2(1, {0, 2}, -1, 5);
  CHECK(std::abs(omega(from_matrix(a, x)) - (rho * x).trace()) < 1e-14);
}

TEST_CASE("invalid data is rejected") {
  CHECK_THROWS_AS(matrix_algebra(0), std::invalid_argument);
  const auto a = matrix_algebra(2);
  Vector negative = Vector::Zero(4);
  negative(matrix_unit(2, 0, 0)) = -1.0;
  CHECK_THROWS_AS(State(a, negative), NotPositive);
  Vector non_hermitian = Vector::Zero(4);
  non_hermitian(matrix_unit(2, 0, 1)) = 1.0;
  CHECK_THROWS_AS(State(a, non_hermitian), std::invalid_argument);
  CHECK_THROWS_AS(State(a, Vector::Ones(3)), DimensionMismatch);

  // Non-associative table on C^2: e_0 e_0 = e_1, everything else zero except e_1 e_0 = e_0.
  std::vector<Matrix> left(2, Matrix::Zero(2, 2));
  left[0](1, 0) = 1.0;
  left[1](0, 0) = 1.0;
  CHECK_THROWS_AS(StarAlgebra(left, Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("an algebra without unit throws MissingUnit") {
  const StarAlgebra nil({Matrix::Zero(1, 1)}, Matrix::Identity(1, 1));
  CHECK_FALSE(nil.has_unit());
  CHECK_THROWS_AS(nil.unit(), MissingUnit);
}

TEST_CASE("structured text round trip") {
  const auto a = matrix_algebra(2);
  const auto j = to_json(a);
  const auto b = algebra_from_json(j);
  CHECK(b.dim() == 4);
  CHECK(b.has_unit());
  CHECK(to_json(b) == j);
  const auto omega = state_from_json(b, to_json(normalized_trace(a, 2)));
  CHECK(std::abs(omega(b.unit()) - 1.0) < 1e-15);
}
