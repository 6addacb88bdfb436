#include "quasistar/function_lab.hpp"
#include "quasistar/suites.hpp"

#include <doctest.h>

#include <cmath>

using namespace quasistar;
using namespace quasistar::function_lab;

namespace {

ScalarFn power(double beta) {
  return [beta](double x) { return Complex(std::pow(x, -beta), 0.0); };
}

}  // namespace

TEST_CASE("quadrature grids integrate x^3") {
  // Simpson is exact on cubics; the graded grid integrates t^{3k} in the
  // substituted variable and converges at fourth order.
  const std::pair<GridPtr, double> grids[] = {
      {uniform_simpson(257), 1e-12}, {geometric_simpson(60), 1e-12}, {graded_simpson(64), 1e-6}};
  for (const auto& [g, tol] : grids) {
    INFO(g->tag());
    const auto x3 = GridFunction::sample(g, [](double x) { return Complex(x * x * x, 0.0); });
    CHECK(integrate(x3).real() == doctest::Approx(0.25).epsilon(tol));
    CHECK(g->weights.sum() == doctest::Approx(g->total_mass).epsilon(1e-14));
  }
  // Gaussian moments: E[x^2] = 1, E[x^4] = 3 under e^{-x^2/2} / sqrt(2 pi).
  const auto gh = gauss_hermite(64);
  const double mass = std::sqrt(2.0 * kPi);
  CHECK(gh->weights.sum() == doctest::Approx(mass).epsilon(1e-13));
  const auto x2 = GridFunction::sample(gh, [](double x) { return Complex(x * x, 0.0); });
  const auto x4 = GridFunction::sample(gh, [](double x) { return Complex(std::pow(x, 4), 0.0); });
  CHECK(integrate(x2).real() / mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate(x4).real() / mass == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("norms of the constant and of x^{-1/4}") {
  const auto g = uniform_simpson();
  CHECK(lp_norm(GridFunction::constant(g, 1.0), 1.0) == doctest::Approx(1.0));
  CHECK(lp_norm(GridFunction::constant(g, 1.0), 3.0) == doctest::Approx(1.0));
  // ||x^{-1/4}||_2 = sqrt(2). The graded grid resolves the singularity; the
  // uniform grid with a half-cell offset only to about 0.3%.
  CHECK(lp_norm(GridFunction::sample(graded_simpson(1024), power(0.25)), 2.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(lp_norm(GridFunction::sample(g, power(0.25)), 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(5e-3));
  CHECK_THROWS_AS(lp_norm(GridFunction::constant(g, 1.0), 0.5), std::invalid_argument);
}

TEST_CASE("weighted form with w = x^{-1/2} on f = g = 1 is 2") {
  const auto g = graded_simpson(1024);
  const auto one = GridFunction::constant(g, 1.0);
  const auto w = GridFunction::sample(g, power(0.5));
  CHECK(omega_form(one, one, w).real() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("functions on different grids do not mix") {
  const auto a = GridFunction::constant(uniform_simpson(257), 1.0);
  const auto b = GridFunction::constant(uniform_simpson(129), 1.0);
  CHECK_THROWS_AS(omega_form(a, b), DimensionMismatch);
  CHECK_THROWS_AS(a + b, DimensionMismatch);
}

TEST_CASE("boundedness classifier") {
  CHECK(boundedness_classifier(2.0).tag == Boundedness::bounded);
  CHECK(boundedness_classifier(4.0).tag == Boundedness::bounded);
  CHECK(boundedness_classifier(1.0).tag == Boundedness::closable_unbounded);
  CHECK(boundedness_classifier(1.5).tag == Boundedness::closable_unbounded);
  // s^{-1} = 1/4 + 1/4: s = 2, the boundary is bounded.
  const auto c = boundedness_classifier(4.0, 2.0);
  CHECK(c.s == doctest::Approx(2.0));
  CHECK(c.tag == Boundedness::bounded);
  CHECK(boundedness_classifier(2.0, 2.0).tag == Boundedness::closable_unbounded);
  CHECK_THROWS_AS(boundedness_classifier(0.5), std::invalid_argument);
  CHECK_THROWS_AS(boundedness_classifier(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(boundedness_classifier(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("tent witness exponent matches 2/p - 1") {
  // ||f_n||_p^2 = n^{1 - 2/p} (p+1)^{-2/p}, Omega(f_n, f_n) = 1/3.
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    INFO("p = " << p);
    const auto w = unboundedness_witness(p);
    CHECK(std::abs(w.exponent - (2.0 / p - 1.0)) < 0.02);
    CHECK(w.rows.front().form == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  }
  CHECK(unboundedness_witness(1.0).exponent >= 0.2);
  CHECK(unboundedness_witness(1.5).exponent >= 0.2);
  CHECK(unboundedness_witness(2.0).exponent <= 0.05);
  CHECK(unboundedness_witness(3.0).exponent <= 0.05);
  CHECK(to_csv(unboundedness_witness(2.0, 8)).rfind("n,norm,form,ratio\n", 0) == 0);
}

TEST_CASE("weighted witness agrees with the classifier") {
  // exponent gamma + 2/p - 1 > 0 exactly when s < 2 in the limit r -> 1/gamma.
  CHECK(weighted_witness(2.0, 0.5).exponent > 0.05);
  CHECK(weighted_witness(3.0, 0.6).exponent > 0.05);
  CHECK(weighted_witness(4.0, 0.25).exponent < 0.0);
  CHECK(weighted_witness(6.0, 0.3).exponent < 0.0);
  CHECK_THROWS_AS(weighted_witness(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("A_Omega = L^2 membership of x^{-beta}") {
  for (double beta : {0.25, 0.45, 0.55, 0.75}) {
    INFO("beta = " << beta);
    CHECK(a_omega_membership(power(beta), 1.0).l2.member == (beta < 0.5));
  }
  CHECK_THROWS_AS(a_omega_membership(power(0.1), 2.0), std::invalid_argument);
}

TEST_CASE("L^s membership of x^{-beta} with p = 4") {
  CHECK(ls_exponent(4.0) == doctest::Approx(4.0));
  CHECK(ls_exponent(3.0) == doctest::Approx(6.0));
  for (double beta : {0.1, 0.2, 0.3, 0.4}) {
    INFO("beta = " << beta);
    const auto v = ls_membership(power(beta), 4.0);
    CHECK(v.ls.member == (beta * 4.0 < 1.0));
    CHECK(v.cross_validated);
  }
}

TEST_CASE("Hermite polynomials") {
  const auto h3 = hermite_coefficients(3);
  REQUIRE(h3.size() == 4);
  CHECK(h3[0] == Complex(0.0));
  CHECK(h3[1] == Complex(-3.0));
  CHECK(h3[2] == Complex(0.0));
  CHECK(h3[3] == Complex(1.0));
  // Orthogonality under the Gaussian weight: E[He_2 He_3] = 0, E[He_3^2] = 3!.
  const auto g = gauss_hermite(64);
  auto eval = [](const std::vector<Complex>& c) {
    return [c](double x) {
      Complex s = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) s = s * x + c[k];
      return s;
    };
  };
  const auto f2 = GridFunction::sample(g, eval(hermite_coefficients(2)));
  const auto f3 = GridFunction::sample(g, eval(h3));
  const double mass = std::sqrt(2.0 * kPi);
  CHECK(std::abs(omega_form(f2, f3)) / mass < 1e-12);
  CHECK(omega_form(f3, f3).real() / mass == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("polynomial probes on the Gaussian space find no counterexample") {
  std::vector<std::vector<Complex>> xn, ones;
  for (int k = 0; k < 40; ++k) xn.push_back({0.0, std::ldexp(1.0, -k)});
  for (int k = 0; k < 20; ++k) ones.push_back({1.0});
  const auto v = gaussian_poly_probe("x/n", xn);
  CHECK(v.applicable);
  CHECK(v.reps_cauchy);
  CHECK(v.limit_seminorm < 1e-6);
  CHECK_FALSE(v.counterexample);
  const auto c = gaussian_poly_probe("constant", ones);
  CHECK_FALSE(c.applicable);
  CHECK_FALSE(c.counterexample);
  CHECK_THROWS_AS(gaussian_poly_probe("x/n", xn, 32), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_poly_probe("short", {{1.0}, {1.0}}), std::invalid_argument);
}

TEST_CASE("extension by closure of the multiplication representation") {
  const auto setup = multiplication_setup(4.0, 400);
  const auto strongstar = suites::extension_runs(setup, topology::Topology::strongstar);
  for (const auto& r : strongstar) {
    INFO(r.target);
    CHECK(r.clamp.result.converged);
    CHECK(r.shift.result.converged);
    CHECK(r.clamp.result.ambient_converged);
    REQUIRE(r.limit_gap);
    CHECK(*r.limit_gap < 1e-6);
  }
  // Unbounded powers land in the completion only; the bounded oscillation stays bounded.
  CHECK(strongstar[0].clamp.result.membership == topology::Membership::completion_only);
  CHECK(strongstar[2].clamp.result.membership == topology::Membership::extended);

  const auto uniform = suites::extension_runs(setup, topology::Topology::uniform);
  CHECK_FALSE(uniform[2].continuous);
  CHECK_FALSE(uniform[2].clamp.result.converged);
  CHECK_FALSE(uniform[2].shift.result.converged);
  CHECK_THROWS_AS(multiplication_setup(2.0), std::invalid_argument);
}
