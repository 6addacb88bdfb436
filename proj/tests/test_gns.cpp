#include "quasistar/gns.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>

using namespace quasistar;
using namespace quasistar::algebra;
using namespace quasistar::gns;

namespace {

// Gram matrix written out by hand from omega(E_ji E_kl) = delta_ik omega(E_jl).
Matrix gram_oracle(const Vector& omega_on_units, int n) {
  const Index d = static_cast<Index>(n) * n;
  Matrix g = Matrix::Zero(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (i == k) g(matrix_unit(n, i, j), matrix_unit(n, k, l)) = omega_on_units(matrix_unit(n, j, l));
  return g;
}

}  // namespace

TEST_CASE("M2 with the normalized trace: faithful, rank 4") {
  const auto a = matrix_algebra(2);
  const auto omega = normalized_trace(a, 2);
  CHECK((build_gram(a, omega) - gram_oracle(omega.functional(), 2)).norm() < 1e-15);

  const auto rep = gns_construct(a, omega);
  CHECK(rep.rank == 4);
  const auto d = verify_gns(a, omega, rep);
  CHECK(d.ok());
  CHECK(d.cyclicity_rank == 4);
}

TEST_CASE("M2 with a pure state: rank 2, pi is the identity representation") {
  const auto a = matrix_algebra(2);
  const auto omega = first_entry_state(a, 2);
  CHECK((build_gram(a, omega) - gram_oracle(omega.functional(), 2)).norm() < 1e-15);

  const auto rep = gns_construct(a, omega);
  CHECK(rep.rank == 2);
  const auto d = verify_gns(a, omega, rep);
  CHECK(d.ok());
  CHECK(d.cyclicity_rank == 2);

  // Unitarily equivalent to M2 acting on C^2: pi(E_ij) has the spectrum of E_ij.
  const Matrix e11 = rep.represent(a.basis(matrix_unit(2, 0, 0)));
  Eigen::SelfAdjointEigenSolver<Matrix> es(e11);
  CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
}

TEST_CASE("C with omega(1) = 1") {
  const auto c = complex_numbers();
  const State omega(c, Vector::Ones(1));
  const auto rep = gns_construct(c, omega);
  REQUIRE(rep.rank == 1);
  CHECK(std::abs(rep.rep_matrices[0](0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(rep.cyclic_vector(0)) - 1.0) < 1e-15);
}

TEST_CASE("Z3 with the group trace: regular representation") {
  const auto z3 = cyclic_group_algebra(3);
  const auto omega = group_trace(z3);
  const auto rep = gns_construct(z3, omega);
  CHECK(rep.rank == 3);
  CHECK(verify_gns(z3, omega, rep).ok());
  // pi(g) is unitary with eigenvalues the cube roots of unity.
  const Matrix g = rep.represent(z3.basis(1));
  CHECK((g * g.adjoint() - Matrix::Identity(3, 3)).norm() < 1e-12);
  CHECK(std::abs(g.trace()) < 1e-12);
  CHECK(std::abs((g * g * g).trace() - 3.0) < 1e-12);
}

TEST_CASE("state reproduction does not depend on the eigenvector ordering") {
  const auto a = matrix_algebra(2);
  const auto omega = normalized_trace(a, 2);
  const auto r1 = gns_construct(a, omega, Ordering::descending);
  const auto r2 = gns_construct(a, omega, Ordering::ascending);
  for (Index i = 0; i < a.dim(); ++i) {
    const auto e = a.basis(i);
    const Complex v1 = r1.cyclic_vector.dot(r1.represent(e) * r1.cyclic_vector);
    const Complex v2 = r2.cyclic_vector.dot(r2.represent(e) * r2.cyclic_vector);
    CHECK(std::abs(v1 - omega(e)) < 1e-12);
    CHECK(std::abs(v2 - omega(e)) < 1e-12);
  }
}

TEST_CASE("preconditions") {
  const StarAlgebra nil({Matrix::Zero(1, 1)}, Matrix::Identity(1, 1));
  const State zero(nil, Vector::Zero(1));
  CHECK_THROWS_AS(gns_construct(nil, zero), MissingUnit);

  const auto a = matrix_algebra(2);
  Vector twice = normalized_trace(a, 2).functional() * 2.0;
  CHECK_THROWS_AS(gns_construct(a, State(a, twice)), std::invalid_argument);
}

TEST_CASE("serialized representation round trip") {
  const auto a = matrix_algebra(2);
  const auto rep = gns_construct(a, first_entry_state(a, 2));
  const auto j = to_json(rep);
  const auto back = gns_from_json(j);
  CHECK(back.rank == rep.rank);
  CHECK(to_json(back) == j);
  CHECK(verify_gns(a, first_entry_state(a, 2), back).ok());
}
