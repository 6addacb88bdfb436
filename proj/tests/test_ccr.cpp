#include "quasistar/ccr.hpp"

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <limits>

using namespace quasistar;
using namespace quasistar::ccr;

namespace {

TauPolynomial tau_poly(std::vector<long long> c) {
  std::vector<GaussianRational> g;
  for (long long x : c) g.push_back({Rational(x), Rational(0)});
  return TauPolynomial(std::move(g));
}

}  // namespace

TEST_CASE("checked rationals") {
  const Rational a(6, -4);
  CHECK(a.numerator() == -3);
  CHECK(a.denominator() == 2);
  CHECK(a + Rational(3, 2) == Rational(0));
  CHECK(a * Rational(2, 3) == Rational(-1));
  CHECK(a.str() == "-3/2");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  Rational big(std::numeric_limits<long long>::max());
  CHECK_THROWS_AS(big * big * big, std::overflow_error);
}

TEST_CASE("p e_1 = e_1 p + 2 pi e_1, exactly") {
  const auto p = ExactCCRPolynomial::p();
  const auto e1 = ExactCCRPolynomial::scalar(ExactTrigPoly::mode(1));
  const ExactCCRPolynomial expected({ExactTrigPoly::mode(1, tau_poly({0, 1})), ExactTrigPoly::mode(1)});
  CHECK(ccr_mul(p, e1) == expected);
  CHECK(ccr_mul(e1, p) == ExactCCRPolynomial({ExactTrigPoly{}, ExactTrigPoly::mode(1)}));
}

TEST_CASE("associativity and (Q1 Q2)* = Q2* Q1* on 100 exact triples") {
  std::mt19937_64 rng(0);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 100; ++i) {
    const auto a = random_exact(rng, 3, 3);
    const auto b = random_exact(rng, 3, 3);
    const auto c = random_exact(rng, 3, 3);
    CHECK(ccr_mul(ccr_mul(a, b), c) == ccr_mul(a, ccr_mul(b, c)));
    CHECK(ccr_star(ccr_mul(a, b)) == ccr_mul(ccr_star(b), ccr_star(a)));
    CHECK(ccr_star(ccr_star(a)) == a);
  }
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 5.0);
}

TEST_CASE("p is symmetric and functions are conjugated") {
  CHECK(ccr_star(CCRPolynomial::p()) == CCRPolynomial::p());
  const auto phi = TrigPoly::mode(2, Complex(1.0, 2.0));
  CHECK(ccr_star(CCRPolynomial::scalar(phi)) == CCRPolynomial::scalar(TrigPoly::mode(-2, Complex(1.0, -2.0))));
}

TEST_CASE("representation of p is diag(2 pi n)") {
  const auto op = ccr_represent(CCRPolynomial::p(), 1);
  Matrix expected = Matrix::Zero(3, 3);
  expected.diagonal() << -2.0 * kPi, 0.0, 2.0 * kPi;
  CHECK((op.matrix - expected).norm() < 1e-14);
  CHECK((momentum_matrix(1) - expected).norm() < 1e-14);
  CHECK_THROWS_AS(ccr_represent(CCRPolynomial::scalar(TrigPoly::mode(3)), 2), std::invalid_argument);
}

TEST_CASE("[pi(p), pi(phi)] = -i pi(phi') on the safe subspace") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) CHECK(commutator_residual(random_trig(rng, 3), 64) < 1e-10);
  CHECK_THROWS_AS(commutator_residual(TrigPoly::mode(5), 4), std::invalid_argument);
}

TEST_CASE("pi is a *-homomorphism away from the truncation edge") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto h = homomorphism_check(random_numeric(rng, 3, 3), random_numeric(rng, 3, 3), 64);
    CHECK(h.product_residual < 1e-10);
    CHECK(h.adjoint_residual < 1e-10);
    CHECK(h.safe_radius <= 64 - 3);
  }
  const auto q = CCRPolynomial::scalar(TrigPoly::mode(3));
  CHECK_THROWS_WITH_AS(homomorphism_check(q, q, 6), doctest::Contains("margin violation"), std::invalid_argument);
}

TEST_CASE("graph seminorms") {
  CHECK(graph_seminorm(TrigPoly::mode(1), 1) == doctest::Approx(1.0 + 4.0 * kPi * kPi).epsilon(1e-15));
  CHECK(std::abs(graph_seminorm(TrigPoly::mode(1), 1) - (1.0 + 4.0 * kPi * kPi)) < 1e-10);
  CHECK(graph_seminorm(TrigPoly::mode(0, 3.0), 4) == doctest::Approx(3.0));
  CHECK(graph_seminorm(TrigPoly::mode(2), 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(graph_seminorm(TrigPoly::mode(1), 5), std::invalid_argument);
}

TEST_CASE("submultiplicativity constant is finite and stable") {
  std::mt19937_64 rng(3);
  std::vector<std::pair<TrigPoly, TrigPoly>> s;
  for (int i = 0; i < 200; ++i) {
    auto f = random_trig(rng, 8);
    s.emplace_back(std::move(f), random_trig(rng, 8));
  }
  for (int k = 0; k <= 2; ++k) {
    const auto r = submultiplicativity_probe(k, s, 16);
    CHECK(r.stable);
    CHECK(std::isfinite(r.max_ratio));
  }
  CHECK_THROWS_AS(submultiplicativity_probe(1, s, 8), std::invalid_argument);
}

TEST_CASE("nonzero polynomials act nontrivially on low modes") {
  CHECK_FALSE(faithfulness_probe(CCRPolynomial::p(), 8).vanishes);
  CHECK(faithfulness_probe(CCRPolynomial{}, 8).vanishes);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const auto q = random_numeric(rng, 3, 3);
    if (!q.is_zero()) CHECK_FALSE(faithfulness_probe(q, 16).vanishes);
  }
}

TEST_CASE("operator-side and pairing-side seminorms coincide") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto e = seminorm_equivalence(random_trig(rng, 3), {random_trig(rng, 2), TrigPoly::mode(0)}, 8);
    CHECK(e.operator_side == doctest::Approx(e.pairing_side).epsilon(1e-12));
  }
}

TEST_CASE("literal syntax round trip") {
  const auto q = ccr_mul(CCRPolynomial::p(), CCRPolynomial::scalar(TrigPoly::mode(1)));
  const auto j = to_json(q);
  CHECK(j.dump() == nlohmann::json::parse(j.dump()).dump());
  CHECK(ccr_from_json(j) == q);
  CHECK_THROWS_AS(ccr_from_json(nlohmann::json::parse("[[-1, []]]")), std::invalid_argument);
  CHECK_THROWS_AS(ccr_from_json(nlohmann::json::parse("{}")), std::invalid_argument);
}
