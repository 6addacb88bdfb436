#include "quasistar/matrix_lab.hpp"

#include <doctest.h>

#include <cmath>

using namespace quasistar;
using namespace quasistar::matrix_lab;

TEST_CASE("weighted norm uses the weights 1/(mn)") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  CHECK(weighted_norm(a) == doctest::Approx(1.0));
  a(1, 2) = 6.0;  // weight 1/(2*3)
  CHECK(weighted_norm(a) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hs_norm(a) == doctest::Approx(std::sqrt(37.0)));
}

TEST_CASE("trace form is tr(B* A)") {
  Matrix a(2, 2), b(2, 2);
  a << 1.0, Complex(0, 2), 3.0, 4.0;
  b << Complex(1, 1), 0.0, 2.0, -1.0;
  CHECK(std::abs(trace_form(a, b) - (b.adjoint() * a).trace()) < 1e-14);
  CHECK(std::abs(trace_form(a, b) - std::conj(trace_form(b, a))) < 1e-14);
  CHECK_THROWS_AS(trace_form(a, Matrix::Zero(3, 3)), DimensionMismatch);
}

TEST_CASE("no unit") {
  CHECK_THROWS_AS(unit(), MissingUnit);
  CHECK_FALSE(trace_form_context().unit.has_value());
}

TEST_CASE("truncation") {
  const auto t = truncate([](Index m, Index n) -> Complex { return static_cast<double>(10 * m + n); }, 3);
  CHECK(t(0, 0) == Complex(11.0));
  CHECK(t(2, 1) == Complex(32.0));
  CHECK_THROWS_AS(truncate([](Index, Index) -> Complex { return 1.0; }, 1), std::invalid_argument);
}

TEST_CASE("every null family has a = 0 at every level") {
  for (const auto& f : null_families()) {
    for (const auto& v : replay_levels(f)) {
      INFO(f.name << " N = " << v.n);
      CHECK(v.weighted_null);
      CHECK(v.hs_cauchy);
      REQUIRE(v.a);
      CHECK(*v.a <= 1e-10);
      CHECK_FALSE(v.counterexample);
    }
  }
}

TEST_CASE("controls are weighted-null but not HS-Cauchy") {
  for (const auto& f : control_families()) {
    const auto v = matrix_closability_replay(f, 256);
    INFO(f.name);
    CHECK(v.weighted_null);
    CHECK_FALSE(v.hs_cauchy);
    CHECK_FALSE(v.counterexample);
  }
}

TEST_CASE("D_Omega identification matches HS-finiteness") {
  // sum 1/(mn)^2 < inf; sum 1/(mn) = inf; sum 1/(m+n)^2 ~ sum 1/k = inf; sum 1/m^2 < inf; sum (mn)^{-3/2} < inf.
  for (const auto& r : d_omega_rules()) {
    INFO(r.name);
    CHECK(d_omega_identification(r.name, r.rule).member == r.hs_finite);
  }
  CHECK_THROWS_AS(d_omega_identification("x", d_omega_rules()[0].rule, {8, 16, 32}), std::invalid_argument);
}

TEST_CASE("truncated squared Basel sum is bracketed") {
  for (Index n : {16, 256}) {
    const auto b = basel_diagnostic(n);
    CHECK(b.lower <= b.truncated);
    CHECK(b.truncated <= b.upper);
    CHECK(b.exact == doctest::Approx(std::pow(kPi, 4) / 36.0));
  }
}

TEST_CASE("replay table") {
  const auto csv = to_csv(null_families().front(), 16);
  CHECK(csv.rfind("k,weighted_norm,hs_norm,pairwise\n", 0) == 0);
  CHECK(doubling_indices(16) == std::vector<double>{1, 2, 4, 8, 16});
}
