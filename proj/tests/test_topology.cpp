#include "quasistar/suites.hpp"
#include "quasistar/topology.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace quasistar;
using namespace quasistar::topology;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

TruncatedTriple weighted_triple(Index n) {
  RealVector metric(n), weights(n);
  for (Index i = 0; i < n; ++i) {
    metric(i) = 1.0 + 0.5 * static_cast<double>(i);
    weights(i) = 1.0 + static_cast<double>(i * i);
  }
  return TruncatedTriple(metric, weights);
}

}  // namespace

TEST_CASE("topology tags") {
  for (auto t : {Topology::uniform, Topology::strong, Topology::strongstar, Topology::weak}) {
    CHECK(parse_topology(to_string(t)) == t);
  }
  CHECK(to_string(Topology::strongstar) == "strongstar");
  CHECK_THROWS_AS(parse_topology("norm"), std::invalid_argument);
}

TEST_CASE("adjoint with respect to a non-Euclidean inner product") {
  std::mt19937_64 rng(3);
  const auto triple = weighted_triple(6);
  const TruncatedOperator a(triple, random_matrix(rng, 6));
  CHECK(a.adjoint_residual() < 1e-12);
  const Vector u = random_matrix(rng, 6).col(0);
  const Vector v = random_matrix(rng, 6).col(1);
  CHECK(std::abs(triple.inner(a.apply(u), v) - triple.inner(u, a.apply_adjoint(v))) < 1e-12);
  CHECK((a.adjoint().adjoint().dense() - a.dense()).norm() < 1e-12);
}

TEST_CASE("operator norm") {
  const auto triple = TruncatedTriple::euclidean(4);
  Vector d(4);
  d << 1.0, Complex(0.0, -3.0), 2.0, 0.5;
  CHECK(operator_norm(TruncatedOperator::diagonal(triple, d)) == doctest::Approx(3.0));
  Matrix m = Matrix::Zero(4, 4);
  m(0, 1) = 2.0;
  CHECK(operator_norm(TruncatedOperator(triple, m)) == doctest::Approx(2.0));
}

TEST_CASE("graph seminorms") {
  const auto triple = weighted_triple(3);
  Vector v(3);
  v << 1.0, 1.0, 1.0;
  // weights 1, 2, 5 with metric 1, 1.5, 2.
  CHECK(triple.graph_seminorm(v, 1) == doctest::Approx(std::sqrt(1.0 + 1.5 * 4.0 + 2.0 * 25.0)));
  CHECK(triple.graph_seminorm(v, 0) == doctest::Approx(triple.norm(v)));
  const auto ball = sample_graph_ball(triple, 2, 5, 1);
  for (Index c = 0; c < ball.size(); ++c) CHECK(triple.graph_seminorm(ball.vectors.col(c), 2) == doctest::Approx(1.0));
}

TEST_CASE("weak <= strong <= strong* <= uniform with matched arguments; involution invariance") {
  const auto r = suites::topology_ordering(200, 0);
  CHECK(r.samples == 200);
  CHECK(r.ordering_excess <= 1e-12);
  CHECK(r.uniform_involution <= 1e-12);
  CHECK(r.strongstar_involution <= 1e-12);
  CHECK(r.weak_involution <= 1e-12);
}

TEST_CASE("strong seminorm is not involution invariant") {
  // A = E_12: A phi vanishes for phi = e_1, A^dagger phi does not.
  const auto triple = TruncatedTriple::euclidean(2);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  const TruncatedOperator a(triple, m);
  BoundedSet set{"basis", Matrix::Identity(2, 2)};
  const Vector e1 = Matrix::Identity(2, 2).col(0);
  CHECK(seminorm(a, triple, Topology::strong, set, e1) == doctest::Approx(0.0));
  CHECK(seminorm(a.adjoint(), triple, Topology::strong, set, e1) == doctest::Approx(1.0));
  CHECK(seminorm(a, triple, Topology::strongstar, set, e1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(seminorm(a, triple, Topology::weak, set, e1), std::invalid_argument);
}

TEST_CASE("extension by closure: Cauchy, divergent and unbounded sequences") {
  std::mt19937_64 rng(5);
  const auto triple = TruncatedTriple::euclidean(5);
  const TruncatedOperator a(triple, random_matrix(rng, 5));
  const TruncatedOperator b(triple, random_matrix(rng, 5));
  const auto family = make_family(triple, Topology::strongstar, default_suite(triple, 0), Matrix::Identity(5, 5));

  std::vector<TruncatedOperator> cauchy, alternating;
  std::vector<double> ambient;
  for (int k = 0; k < 40; ++k) {
    cauchy.push_back(a + std::ldexp(1.0, -k) * b);
    alternating.push_back(a + ((k % 2) ? 1.0 : -1.0) * b);
    ambient.push_back(std::ldexp(1.0, -k));
  }
  const auto ok = extend_by_closure(ambient, cauchy, family);
  CHECK(ok.converged);
  CHECK(ok.ambient_converged);
  CHECK(ok.membership == Membership::extended);
  REQUIRE(ok.limit);
  CHECK((ok.limit->dense() - a.dense()).norm() < 1e-9);

  const auto bad = extend_by_closure(ambient, alternating, family);
  CHECK_FALSE(bad.converged);
  CHECK(bad.membership == Membership::none);

  // Cauchy, but the size triples across the run: reported as a completion limit.
  std::vector<TruncatedOperator> growing;
  double s = 1.0;
  for (int k = 0; k < 40; ++k) {
    growing.push_back(s * a);
    s += std::ldexp(1.0, -k);
  }
  const auto grow = extend_by_closure(ambient, growing, family);
  CHECK(grow.converged);
  CHECK(grow.membership == Membership::completion_only);

  const auto csv = trace_csv(ok);
  CHECK(csv.rfind("step,", 0) == 0);
  CHECK(to_json(ok)["converged"] == true);
}

TEST_CASE("closability check flags a tau-null sequence with a nonzero limit") {
  const auto triple = TruncatedTriple::euclidean(3);
  const auto family = make_family(triple, Topology::strongstar, default_suite(triple, 0), Matrix::Identity(3, 3));
  NullFamily bad{"projection", {}, {}}, good{"shrinking", {}, {}};
  Matrix p = Matrix::Zero(3, 3);
  p(0, 0) = 1.0;
  for (int k = 0; k < 30; ++k) {
    bad.ambient_norms.push_back(std::ldexp(1.0, -k));
    bad.reps.emplace_back(triple, p);
    good.ambient_norms.push_back(std::ldexp(1.0, -k));
    good.reps.emplace_back(triple, std::ldexp(1.0, -k) * p);
  }
  const auto v = closability_check({bad, good}, family);
  REQUIRE(v.families.size() == 2);
  CHECK(v.families[0].counterexample);
  CHECK_FALSE(v.families[1].counterexample);
  CHECK(v.counterexample_found());
}
