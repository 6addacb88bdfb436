#include "quasistar/forms.hpp"
#include "quasistar/suites.hpp"

#include <doctest.h>

#include <cmath>

using namespace quasistar;
using namespace quasistar::forms;

namespace {

std::vector<double> powers(int last) {
  std::vector<double> v;
  for (int k = 0; k <= last; ++k) v.push_back(std::ldexp(1.0, k));
  return v;
}

// Ambient norm sees only the first coordinate, the form only the second:
// X_n = (1/n, 1) is tau-null with Omega(X_n, X_n) = 1, a non-closable pair.
FormContext<Vector> split_context() {
  FormContext<Vector> ctx;
  ctx.name = "split";
  ctx.ambient_norm = [](const Vector& v) { return std::abs(v(0)); };
  ctx.form = [](const Vector& a, const Vector& b) { return a(1) * std::conj(b(1)); };
  ctx.subtract = [](const Vector& a, const Vector& b) -> Vector { return a - b; };
  return ctx;
}

Vector vec2(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("closability probe flags a tau-null, Omega-Cauchy family with positive limit") {
  const auto ctx = split_context();
  const ProbeFamily<Vector> bad{"(1/n, 1)", powers(30), [](double n) { return vec2(1.0 / n, 1.0); }};
  const auto v = closability_probe(ctx, bad);
  CHECK(v.tau_null);
  CHECK(v.omega_cauchy);
  REQUIRE(v.omega_limit);
  CHECK(*v.omega_limit == doctest::Approx(1.0));
  CHECK(v.counterexample());

  const ProbeFamily<Vector> good{"(1/n, 1/n)", powers(30), [](double n) { return vec2(1.0 / n, 1.0 / n); }};
  const auto g = closability_probe(ctx, good);
  CHECK(g.tau_null);
  CHECK_FALSE(g.counterexample());

  const ProbeFamily<Vector> wild{"(1/n, n)", powers(30), [](double n) { return vec2(1.0 / n, n); }};
  const auto w = closability_probe(ctx, wild);
  CHECK_FALSE(w.omega_cauchy);
  CHECK_FALSE(w.counterexample());
}

TEST_CASE("csv table columns") {
  const auto v = closability_probe(split_context(), ProbeFamily<Vector>{"f", powers(3), [](double n) {
                                     return vec2(1.0 / n, 0.0);
                                   }});
  const auto csv = to_csv(v);
  CHECK(csv.rfind("n,tau_norm,omega_diag,omega_pairwise\n", 0) == 0);
  CHECK(v.table.size() == 4);
  CHECK(std::isnan(v.table.front().omega_pairwise));
}

TEST_CASE("derived forms on M2") {
  const auto a = algebra::matrix_algebra(2);
  const auto ctx = form_from_state(a, algebra::first_entry_state(a, 2));
  const auto star = star_form(ctx);
  const auto e12 = a.basis(algebra::matrix_unit(2, 0, 1));
  const auto e21 = a.basis(algebra::matrix_unit(2, 1, 0));
  // Omega(E12, E12) = omega(E21 E12) = (E22)_11 = 0; Omega*(E12, E12) = Omega(E21, E21) = 1.
  CHECK(std::abs(ctx(e12, e12)) < 1e-15);
  CHECK(std::abs(star(e12, e12) - 1.0) < 1e-15);
  const auto shifted = b_shifted_form(ctx, e21, "E21");
  // Omega_B(E12, E12) = Omega(E12 E21, E12 E21) = Omega(E11, E11) = 1.
  CHECK(std::abs(shifted(e12, e12) - 1.0) < 1e-15);
  CHECK_THROWS_AS(star_form(split_context()), std::invalid_argument);
}

TEST_CASE("form axioms detect a non-positive form") {
  auto ctx = split_context();
  ctx.form = [](const Vector& a, const Vector& b) { return a(0) * std::conj(b(0)) - a(1) * std::conj(b(1)); };
  const std::vector<std::pair<Vector, Vector>> pairs = {{vec2(0.0, 1.0), vec2(1.0, 1.0)}};
  CHECK_FALSE(check_form_axioms(ctx, pairs).ok());
}

TEST_CASE("form axioms hold on 1000 random pairs in every context") {
  for (auto suite : {suites::finite_axioms, suites::lp_axioms, suites::matrix_axioms}) {
    for (const auto& r : suite(1000, 0)) {
      INFO(r.context);
      CHECK(r.report.pairs == 1000);
      CHECK(r.report.ok(1e-10));
    }
  }
}

TEST_CASE("closability verdicts agree under Omega, Omega* and Omega_B") {
  auto reports = suites::finite_equivalence();
  reports.push_back(suites::lp_equivalence());
  reports.push_back(suites::matrix_equivalence(64));
  for (const auto& r : reports) {
    INFO(r.context);
    CHECK(r.all_agree());
    CHECK(r.counterexamples() == 0);
    for (const auto& row : r.rows) CHECK(row.shifted.size() == 5);
  }
}

TEST_CASE("equivalence agreement is checked family by family") {
  EquivalenceRow row;
  row.family = "synthetic";
  row.base = closability_probe(split_context(), ProbeFamily<Vector>{"(1/n, 1/n)", powers(30), [](double n) {
                                 return vec2(1.0 / n, 1.0 / n);
                               }});
  row.starred = closability_probe(split_context(), ProbeFamily<Vector>{"(1/n, 1)", powers(30), [](double n) {
                                    return vec2(1.0 / n, 1.0);
                                  }});
  CHECK_FALSE(row.agree());
}

TEST_CASE("two approximations of one limit give the same closure value") {
  const auto a = algebra::matrix_algebra(2);
  const auto ctx = form_from_state(a, algebra::normalized_trace(a, 2));
  const auto target = a.basis(algebra::matrix_unit(2, 0, 1));
  const auto noise = a.basis(algebra::matrix_unit(2, 1, 1));
  const ProbeFamily<algebra::AlgebraElement> x{"x", powers(30), [=](double n) { return target + (1.0 / n) * noise; }};
  const ProbeFamily<algebra::AlgebraElement> y{"y", powers(30), [=](double n) { return target - (2.0 / n) * noise; }};
  const auto c = compare_approximations(ctx, x, y);
  CHECK(c.cross_tends_to_zero);
  CHECK(c.cross_distance < 1e-15);
}
