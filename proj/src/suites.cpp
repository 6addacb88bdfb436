#include "quasistar/suites.hpp"

#include "quasistar/algebra.hpp"
#include "quasistar/ccr.hpp"
#include "quasistar/matrix_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace quasistar::suites {

namespace {

using algebra::AlgebraElement;
using function_lab::GridFunction;

std::vector<double> powers_of_two(int last) {
  std::vector<double> v;
  for (int k = 0; k <= last; ++k) v.push_back(std::ldexp(1.0, k));
  return v;
}

Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

AlgebraElement m2(const algebra::StarAlgebra& a, int i, int j, Complex c = 1.0) {
  return c * a.basis(algebra::matrix_unit(2, i, j));
}

forms::EquivalenceReport finite_report(const algebra::StarAlgebra& a, const algebra::State& omega, std::string name) {
  auto ctx = forms::form_from_state(a, omega);
  ctx.name = std::move(name);
  const auto idx = powers_of_two(30);
  const auto e11 = m2(a, 0, 0), e12 = m2(a, 0, 1), e21 = m2(a, 1, 0), e22 = m2(a, 1, 1);
  std::vector<forms::ProbeFamily<AlgebraElement>> fams = {
      {"E11/n", idx, [=](double n) { return (1.0 / n) * e11; }},
      {"(E12+E21)/n", idx, [=](double n) { return (1.0 / n) * (e12 + e21); }},
      {"iE22/sqrt(n)", idx, [=](double n) { return Complex(0.0, 1.0 / std::sqrt(n)) * e22; }},
      {"I/n", idx, [=](double n) { return (1.0 / n) * a.unit(); }},
      {"E11+E12/n", idx, [=](double n) { return e11 + (1.0 / n) * e12; }},
  };
  const std::vector<std::pair<std::string, AlgebraElement>> bs = {
      {"I", a.unit()}, {"E11", e11}, {"E12", e12}, {"E12+E21", e12 + e21}, {"iE22", Complex(0.0, 1.0) * e22}};
  return forms::check_lemma24(ctx, fams, bs);
}

}  // namespace

std::vector<forms::EquivalenceReport> finite_equivalence() {
  const auto a = algebra::matrix_algebra(2);
  return {finite_report(a, algebra::normalized_trace(a, 2), "M2_trace"),
          finite_report(a, algebra::first_entry_state(a, 2), "M2_pure")};
}

forms::EquivalenceReport lp_equivalence() {
  const auto grid = function_lab::uniform_simpson(4097);
  const auto ctx = function_lab::lp_form_context(grid, 1.0);
  std::vector<forms::ProbeFamily<GridFunction>> fams;
  std::vector<double> tent_idx;
  for (int n = 2; n <= 1024; n *= 2) tent_idx.push_back(n);
  for (double h : {0.25, 0.5, 0.75}) {
    const auto t = function_lab::tent_family(h);
    fams.push_back({"tent(h=" + std::to_string(h).substr(0, 4) + ")", tent_idx,
                    [grid, t](double n) { return GridFunction::sample(grid, t.member(n)); }});
  }
  fams.push_back({"1/n", powers_of_two(30), [grid](double n) { return GridFunction::constant(grid, 1.0 / n); }});
  fams.push_back({"x^n", tent_idx, [grid](double n) {
                    return GridFunction::sample(grid, [n](double x) { return Complex(std::pow(x, n), 0.0); });
                  }});

  auto fn = [grid](auto f) { return GridFunction::sample(grid, f); };
  const std::vector<std::pair<std::string, GridFunction>> bs = {
      {"1", GridFunction::constant(grid, 1.0)},
      {"x", fn([](double x) { return Complex(x, 0.0); })},
      {"cos(2pi x)", fn([](double x) { return Complex(std::cos(2.0 * kPi * x), 0.0); })},
      {"x^2", fn([](double x) { return Complex(x * x, 0.0); })},
      {"exp(2pi i x)", fn([](double x) { return std::exp(Complex(0.0, 2.0 * kPi * x)); })},
  };
  return forms::check_lemma24(ctx, fams, bs);
}

forms::EquivalenceReport matrix_equivalence(Index n) {
  if (n < 8) throw std::invalid_argument("matrix_equivalence: n must be >= 8");
  const auto ctx = matrix_lab::trace_form_context();
  std::vector<forms::ProbeFamily<Matrix>> fams;
  auto add = [&](const matrix_lab::MatrixFamily& f) {
    fams.push_back({f.name, matrix_lab::doubling_indices(n), [f, n](double k) { return f.member(k, n); }});
  };
  for (const auto& f : matrix_lab::null_families()) add(f);
  for (const auto& f : matrix_lab::control_families()) add(f);

  auto unit = [n](Index i, Index j) {
    Matrix m = Matrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
  };
  Matrix block = Matrix::Zero(n, n);
  block.topLeftCorner(3, 3).setOnes();
  const Matrix harmonic = matrix_lab::truncate(
      [](Index m, Index j) -> Complex { return m == j ? 1.0 / static_cast<double>(m) : 0.0; }, n);
  const std::vector<std::pair<std::string, Matrix>> bs = {
      {"E11", unit(0, 0)},
      {"E12+E21", unit(0, 1) + unit(1, 0)},
      {"iE22", Complex(0.0, 1.0) * unit(1, 1)},
      {"block3", block},
      {"diag(1/m)", harmonic},
  };
  return forms::check_lemma24(ctx, fams, bs);
}

// --- form axioms ----------------------------------------------------------------

std::vector<LabelledAxioms> finite_axioms(std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabelledAxioms> out;
  auto run = [&](const algebra::StarAlgebra& a, const algebra::State& omega, std::string label) {
    const auto ctx = forms::form_from_state(a, omega);
    std::vector<std::pair<AlgebraElement, AlgebraElement>> samples;
    for (std::size_t i = 0; i < pairs; ++i) {
      samples.emplace_back(a.element(random_vector(rng, a.dim())), a.element(random_vector(rng, a.dim())));
    }
    out.push_back({std::move(label), forms::check_form_axioms(ctx, samples)});
  };
  const auto m2a = algebra::matrix_algebra(2);
  run(m2a, algebra::normalized_trace(m2a, 2), "M2_trace");
  run(m2a, algebra::first_entry_state(m2a, 2), "M2_pure");
  const auto m3a = algebra::matrix_algebra(3);
  Matrix rho = Matrix::Zero(3, 3);
  rho.diagonal() << 0.5, 0.3, 0.2;
  rho(0, 1) = Complex(0.1, 0.05);
  rho(1, 0) = std::conj(rho(0, 1));
  run(m3a, algebra::density_state(m3a, rho), "M3_density");
  const auto z3 = algebra::cyclic_group_algebra(3);
  run(z3, algebra::group_trace(z3), "Z3_trace");
  return out;
}

std::vector<LabelledAxioms> lp_axioms(std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto grid = function_lab::uniform_simpson(1025);
  const std::vector<function_lab::ScalarFn> basis = {
      [](double) { return Complex(1.0, 0.0); },
      [](double x) { return Complex(x, 0.0); },
      [](double x) { return Complex(x * x * x, 0.0); },
      [](double x) { return Complex(std::cos(2.0 * kPi * x), 0.0); },
      [](double x) { return Complex(std::sin(6.0 * kPi * x), 0.0); },
      [](double x) { return Complex(std::sqrt(x), 0.0); },
  };
  std::vector<GridFunction> sampled;
  for (const auto& b : basis) sampled.push_back(GridFunction::sample(grid, b));
  auto random_function = [&] {
    const Vector c = random_vector(rng, static_cast<Index>(sampled.size()));
    GridFunction f = c(0) * sampled[0];
    for (std::size_t i = 1; i < sampled.size(); ++i) f = f + c(static_cast<Index>(i)) * sampled[i];
    return f;
  };
  std::vector<std::pair<GridFunction, GridFunction>> samples;
  for (std::size_t i = 0; i < pairs; ++i) {
    auto f = random_function();
    samples.emplace_back(std::move(f), random_function());
  }
  const auto weight = GridFunction::sample(grid, [](double x) { return Complex(1.0 / std::sqrt(x), 0.0); });
  return {{"L1", forms::check_form_axioms(function_lab::lp_form_context(grid, 1.0), samples)},
          {"L3_weighted", forms::check_form_axioms(function_lab::lp_form_context(grid, 3.0, weight), samples)}};
}

std::vector<LabelledAxioms> matrix_axioms(std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index n = 16;
  auto random_matrix = [&] {
    Matrix m(n, n);
    m.reshaped() = random_vector(rng, n * n);
    return m;
  };
  std::vector<std::pair<Matrix, Matrix>> samples;
  for (std::size_t i = 0; i < pairs; ++i) {
    auto a = random_matrix();
    samples.emplace_back(std::move(a), random_matrix());
  }
  return {{"trace_form", forms::check_form_axioms(matrix_lab::trace_form_context(), samples)}};
}

nlohmann::json to_json(const LabelledAxioms& a) {
  return {{"context", a.context},
          {"pairs", a.report.pairs},
          {"hermiticity_residual", a.report.hermiticity_residual},
          {"min_diagonal", a.report.min_diagonal},
          {"cauchy_schwarz_excess", a.report.cauchy_schwarz_excess},
          {"ok", a.report.ok()}};
}

// --- topology ordering ------------------------------------------------------------

OrderingReport topology_ordering(std::size_t samples, std::uint64_t seed, int n_trunc) {
  using topology::Topology;
  std::mt19937_64 rng(seed);
  const auto triple = ccr::fourier_triple(n_trunc);
  const Index dim = triple.dim();
  OrderingReport r;
  auto rel = [](double lower, double upper) { return (lower - upper) / std::max(1.0, upper); };
  auto gap = [](double x, double y) { return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)}); };

  for (std::size_t i = 0; i < samples; ++i) {
    std::optional<topology::TruncatedOperator> a;
    switch (i % 3) {
      case 0: {
        Matrix m(dim, dim);
        m.reshaped() = random_vector(rng, dim * dim);
        a.emplace(triple, m);
        break;
      }
      case 1:
        a.emplace(ccr::to_truncated(ccr::ccr_represent(ccr::random_numeric(rng, 2, 2), n_trunc)));
        break;
      default:
        a.emplace(topology::TruncatedOperator::diagonal(triple, random_vector(rng, dim)));
        break;
    }
    const auto m = topology::sample_graph_ball(triple, static_cast<int>(i % 3), 6, seed * 7919 + i, "ball");
    const Vector phi = m.vectors.col(0);
    const Vector psi = m.vectors.col(1);
    const auto adj = a->adjoint();

    const double weak = topology::seminorm(*a, triple, Topology::weak, m, phi, psi);
    const double strong = topology::seminorm(*a, triple, Topology::strong, m, phi);
    const double strongstar = topology::seminorm(*a, triple, Topology::strongstar, m, phi);
    const double uniform = topology::seminorm(*a, triple, Topology::uniform, m);
    r.ordering_excess = std::max({r.ordering_excess, rel(weak, strong), rel(strong, strongstar), rel(strongstar, uniform)});

    r.uniform_involution =
        std::max(r.uniform_involution, gap(uniform, topology::seminorm(adj, triple, Topology::uniform, m)));
    r.strongstar_involution =
        std::max(r.strongstar_involution, gap(strongstar, topology::seminorm(adj, triple, Topology::strongstar, m, phi)));
    r.weak_involution =
        std::max(r.weak_involution, gap(weak, topology::seminorm(adj, triple, Topology::weak, m, psi, phi)));
    ++r.samples;
  }
  return r;
}

nlohmann::json to_json(const OrderingReport& r) {
  return {{"samples", r.samples},
          {"ordering_excess", r.ordering_excess},
          {"uniform_involution", r.uniform_involution},
          {"strongstar_involution", r.strongstar_involution},
          {"weak_involution", r.weak_involution},
          {"ok", r.ok()}};
}

// --- extension runs -----------------------------------------------------------

std::vector<TargetRun> extension_runs(const function_lab::MultiplicationSetup& setup, topology::Topology t) {
  struct Target {
    std::string name;
    function_lab::ScalarFn f;
    bool continuous;
  };
  const std::vector<Target> targets = {
      {"x^-0.1", [](double x) { return Complex(std::pow(x, -0.1), 0.0); }, true},
      {"x^-0.2", [](double x) { return Complex(std::pow(x, -0.2), 0.0); }, true},
      {"cos(2pi log2 x)", function_lab::log_oscillation(), false},
  };
  const auto cutoffs = function_lab::dyadic_cutoffs(40, 8);
  const auto family = setup.family(t);
  std::vector<TargetRun> out;
  for (const auto& target : targets) {
    TargetRun run;
    run.target = target.name;
    run.continuous = target.continuous;
    run.clamp = function_lab::run_extension(setup, function_lab::clamp_approximation(target.name, target.f, cutoffs), t);
    run.shift = function_lab::run_extension(setup, function_lab::shift_approximation(target.name, target.f, cutoffs), t);
    if (run.clamp.result.converged && run.shift.result.converged) {
      const auto d = family.evaluate(*run.clamp.result.limit - *run.shift.result.limit);
      run.limit_gap = *std::max_element(d.begin(), d.end());
    }
    out.push_back(std::move(run));
  }
  return out;
}

nlohmann::json to_json(const TargetRun& r) {
  return {{"target", r.target},
          {"clamp", topology::to_json(r.clamp.result)},
          {"shift", topology::to_json(r.shift.result)},
          {"limit_gap", r.limit_gap ? nlohmann::json(*r.limit_gap) : nlohmann::json(nullptr)}};
}

}  // namespace quasistar::suites
