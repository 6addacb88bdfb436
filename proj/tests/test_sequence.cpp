#include "quasistar/sequence.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace quasistar::sequence;

namespace {

std::vector<double> indices() {
  std::vector<double> n;
  for (int k = 1; k <= 20; ++k) n.push_back(std::ldexp(1.0, k));
  return n;
}

template <class F>
std::vector<double> sample(const std::vector<double>& n, F f) {
  std::vector<double> v;
  for (double x : n) v.push_back(f(x));
  return v;
}

}  // namespace

TEST_CASE("power fit recovers the exponent") {
  const auto n = indices();
  const auto fit = fit_last_decade(n, sample(n, [](double x) { return 3.0 * std::pow(x, -0.7); }));
  REQUIRE(fit);
  CHECK(fit->slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(std::exp(fit->intercept) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("zero-limit verdicts") {
  const auto n = indices();
  CHECK(tends_to_zero(n, sample(n, [](double x) { return 1.0 / x; })));
  CHECK(tends_to_zero(n, sample(n, [](double x) { return 1.0 / std::sqrt(std::log(x)); })) == false);
  CHECK_FALSE(tends_to_zero(n, sample(n, [](double) { return 0.3; })));
  CHECK_FALSE(tends_to_zero(n, sample(n, [](double x) { return x; })));
  CHECK(tends_to_zero(n, sample(n, [](double) { return 0.0; })));
}

TEST_CASE("negligible tail uses the last window only") {
  std::vector<double> v = {1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(tail_negligible(v));
  v.back() = 1e-6;
  CHECK_FALSE(tail_negligible(v));
  CHECK(tail_negligible(v, 1e7));
  CHECK_FALSE(tail_negligible({}));
}

TEST_CASE("doubling rate") {
  // Partial sums of a convergent geometric series halve their increments.
  std::vector<double> conv, div;
  double s = 0.0;
  for (int k = 0; k < 8; ++k) {
    s += std::ldexp(1.0, -k);
    conv.push_back(s);
    div.push_back(std::ldexp(1.0, k));
  }
  const auto rc = doubling_rate(conv);
  const auto rd = doubling_rate(div);
  REQUIRE(rc);
  REQUIRE(rd);
  CHECK(*rc == doctest::Approx(-1.0));
  CHECK(*rd == doctest::Approx(1.0));
  CHECK_FALSE(doubling_rate({2.0, 2.0, 2.0, 2.0}));
  CHECK_THROWS_AS(doubling_rate({1.0, 2.0}), std::invalid_argument);
}
