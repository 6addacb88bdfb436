#include "quasistar/scenarios.hpp"

#include "quasistar/algebra.hpp"
#include "quasistar/ccr.hpp"
#include "quasistar/function_lab.hpp"
#include "quasistar/gns.hpp"
#include "quasistar/matrix_lab.hpp"
#include "quasistar/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace quasistar::scenarios {

namespace {

using nlohmann::json;
namespace fl = function_lab;
namespace topo = topology;

void expect(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.failures.push_back(what);
}

Outcome finish(Outcome o) {
  o.passed = o.failures.empty();
  o.result["failures"] = o.failures;
  return o;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

// --- gns ----------------------------------------------------------------------

Outcome run_gns(const json& p, std::uint64_t) {
  const std::string kind = p.at("algebra");
  const std::string state = p.at("state");
  const int n = p.at("n");
  std::optional<algebra::StarAlgebra> a;
  std::optional<algebra::State> omega;
  if (kind == "matrix") {
    a = algebra::matrix_algebra(n);
    if (state == "trace") omega = algebra::normalized_trace(*a, n);
    else if (state == "pure") omega = algebra::first_entry_state(*a, n);
  } else if (kind == "cyclic") {
    a = algebra::cyclic_group_algebra(n);
    if (state == "trace") omega = algebra::group_trace(*a);
  } else if (kind == "complex") {
    a = algebra::complex_numbers();
    if (state == "trace") omega.emplace(*a, Vector::Ones(1));
  } else {
    throw std::invalid_argument("gns_construct: unknown algebra '" + kind + "'");
  }
  if (!omega) throw std::invalid_argument("gns_construct: state '" + state + "' undefined on " + kind);

  const auto rep = gns::gns_construct(*a, *omega);
  const auto diag = gns::verify_gns(*a, *omega, rep);
  Outcome o;
  o.result = {{"algebra", algebra::to_json(*a)},
              {"state", algebra::to_json(*omega)},
              {"gns_rep", gns::to_json(rep)},
              {"diagnostics", gns::to_json(diag)}};
  expect(o, diag.ok(), "GNS residuals exceed 1e-10");
  expect(o, diag.cyclicity_rank == rep.rank, "cyclic vector does not span the quotient");
  return finish(std::move(o));
}

// --- forms --------------------------------------------------------------------

Outcome run_form_axioms(const json& p, std::uint64_t seed) {
  const std::size_t pairs = p.at("pairs");
  Outcome o;
  o.result["contexts"] = json::array();
  std::ostringstream csv;
  csv << std::setprecision(12) << "context,pairs,hermiticity_residual,min_diagonal,cauchy_schwarz_excess\n";
  for (const std::string ctx : p.at("contexts")) {
    std::vector<suites::LabelledAxioms> reports;
    if (ctx == "finite") reports = suites::finite_axioms(pairs, seed);
    else if (ctx == "lp") reports = suites::lp_axioms(pairs, seed);
    else if (ctx == "matrix") reports = suites::matrix_axioms(pairs, seed);
    else throw std::invalid_argument("form_axioms: unknown context '" + ctx + "'");
    for (const auto& r : reports) {
      o.result["contexts"].push_back(suites::to_json(r));
      csv << r.context << ',' << r.report.pairs << ',' << r.report.hermiticity_residual << ','
          << r.report.min_diagonal << ',' << r.report.cauchy_schwarz_excess << '\n';
      expect(o, r.report.ok(), "axioms fail in " + r.context);
    }
  }
  o.tables.push_back({"axioms", csv.str()});
  return finish(std::move(o));
}

void add_equivalence(Outcome& o, const forms::EquivalenceReport& r) {
  o.result["reports"].push_back(forms::to_json(r));
  for (const auto& row : r.rows) o.tables.push_back({r.context + "__" + row.family, forms::to_csv(row.base)});
  expect(o, r.all_agree(), "closability verdicts disagree in " + r.context);
}

Outcome run_equivalence(const json& p, std::uint64_t) {
  Outcome o;
  o.result["reports"] = json::array();
  for (const std::string ctx : p.at("contexts")) {
    if (ctx == "finite") {
      for (const auto& r : suites::finite_equivalence()) add_equivalence(o, r);
    } else if (ctx == "lp") {
      add_equivalence(o, suites::lp_equivalence());
    } else if (ctx == "matrix") {
      const auto r = suites::matrix_equivalence(p.at("matrix_n").get<Index>());
      add_equivalence(o, r);
      expect(o, r.counterexamples() == 0, "counterexample found for the trace form");
    } else {
      throw std::invalid_argument("closability_equivalence: unknown context '" + ctx + "'");
    }
  }
  return finish(std::move(o));
}

// --- function-lab -------------------------------------------------------------

fl::ScalarFn power(double beta) {
  return [beta](double x) { return Complex(std::pow(x, -beta), 0.0); };
}

json refinement_json(const fl::RefinementVerdict& v) {
  return {{"member", v.member}, {"rate", v.rate ? json(*v.rate) : json(nullptr)}, {"values", v.values}};
}

Outcome run_lp_dichotomy(const json& p, std::uint64_t) {
  Outcome o;
  const int n_max = p.at("n_max");
  o.result["witness"] = json::array();
  for (double q : p.at("witness_p")) {
    const auto w = fl::unboundedness_witness(q, n_max);
    const auto cls = fl::boundedness_classifier(q);
    o.result["witness"].push_back({{"p", q}, {"exponent", w.exponent}, {"classification", fl::to_string(cls.tag)}});
    o.tables.push_back({"witness_p" + fmt(q), fl::to_csv(w)});
    if (cls.tag == fl::Boundedness::closable_unbounded) {
      expect(o, w.exponent >= 0.2, "witness exponent below 0.2 at p = " + fmt(q));
    } else {
      expect(o, w.exponent <= 0.05, "witness exponent above 0.05 at p = " + fmt(q));
    }
  }
  const double mp = p.at("membership_p");
  o.result["membership"] = json::array();
  for (double beta : p.at("betas")) {
    const auto v = fl::a_omega_membership(power(beta), mp);
    o.result["membership"].push_back({{"beta", beta}, {"l2", refinement_json(v.l2)}});
    expect(o, v.l2.member == (beta < 0.5), "A_Omega membership wrong at beta = " + fmt(beta));
  }
  return finish(std::move(o));
}

Outcome run_weighted(const json& p, std::uint64_t) {
  Outcome o;
  const int n_max = p.at("n_max");
  o.result["cases"] = json::array();
  for (const auto& c : p.at("cases")) {
    if (!c.is_array() || c.size() != 3) throw std::invalid_argument("weighted_dichotomy: case must be [p, gamma, r]");
    const double q = c[0], gamma = c[1], r = c[2];
    if (!(r * gamma < 1.0)) throw std::invalid_argument("weighted_dichotomy: x^-gamma is not in L^r");
    const auto cls = fl::boundedness_classifier(q, r);
    const auto w = fl::weighted_witness(q, gamma, n_max);
    o.result["cases"].push_back({{"p", q},
                                 {"gamma", gamma},
                                 {"r", r},
                                 {"s", cls.s},
                                 {"classification", fl::to_string(cls.tag)},
                                 {"exponent", w.exponent},
                                 {"predicted_exponent", gamma + 2.0 / q - 1.0}});
    o.tables.push_back({"weighted_p" + fmt(q) + "_gamma" + fmt(gamma), fl::to_csv(w)});
    const bool grows = w.exponent > 0.05;
    expect(o, grows == (cls.tag == fl::Boundedness::closable_unbounded),
           "classifier and witness disagree at p = " + fmt(q) + ", gamma = " + fmt(gamma));
  }
  const auto grid = fl::graded_simpson(1024);
  const auto one = fl::GridFunction::constant(grid, 1.0);
  const auto w = fl::GridFunction::sample(grid, [](double x) { return Complex(1.0 / std::sqrt(x), 0.0); });
  const double value = fl::omega_form(one, one, w).real();
  o.result["omega_1_1_sqrt_weight"] = value;
  expect(o, std::abs(value - 2.0) < 1e-8, "weighted form of the constant 1 differs from 2");
  return finish(std::move(o));
}

Outcome run_ls_membership(const json& p, std::uint64_t) {
  Outcome o;
  const double q = p.at("p");
  o.result["verdicts"] = json::array();
  for (double beta : p.at("betas")) {
    const auto v = fl::ls_membership(power(beta), q);
    json j = fl::to_json(v);
    j["beta"] = beta;
    o.result["verdicts"].push_back(j);
    expect(o, v.ls.member == (beta * v.s < 1.0), "L^s membership wrong at beta = " + fmt(beta));
    expect(o, v.cross_validated, "probe cross-check inconsistent at beta = " + fmt(beta));
  }
  return finish(std::move(o));
}

std::vector<std::vector<Complex>> gaussian_family(const std::string& name) {
  std::vector<std::vector<Complex>> c;
  if (name == "x/n") {
    for (int k = 0; k < 40; ++k) c.push_back({0.0, std::ldexp(1.0, -k)});
  } else if (name == "hermite") {
    for (int n = 1; n <= 20; ++n) {
      auto h = fl::hermite_coefficients(n);
      const double s = std::sqrt(std::tgamma(n + 1.0)) * std::pow(50.0, n);
      for (auto& z : h) z /= s;
      c.push_back(h);
    }
  } else if (name == "constant") {
    for (int n = 0; n < 20; ++n) c.push_back({1.0});
  } else {
    throw std::invalid_argument("gaussian_probe: unknown family '" + name + "'");
  }
  return c;
}

Outcome run_gaussian(const json& p, std::uint64_t) {
  Outcome o;
  const Index nodes = p.at("nodes");
  o.result["families"] = json::array();
  for (const std::string name : p.at("families")) {
    const auto v = fl::gaussian_poly_probe(name, gaussian_family(name), nodes);
    o.result["families"].push_back(fl::to_json(v));
    std::ostringstream csv;
    csv << std::setprecision(12) << "n,l1_norm,seminorm_1,seminorm_2,seminorm_3,seminorm_4\n";
    for (const auto& row : v.rows) {
      csv << row.index << ',' << row.l1_norm;
      for (double s : row.seminorms) csv << ',' << s;
      csv << '\n';
    }
    o.tables.push_back({"gaussian_" + (name == "x/n" ? std::string("x_over_n") : name), csv.str()});
    expect(o, !v.counterexample, "closability counterexample from family " + name);
    if (name != "constant") expect(o, v.applicable, "family " + name + " is not L^1-null");
  }
  return finish(std::move(o));
}

// --- matrix-lab ---------------------------------------------------------------

Outcome run_matrix_replay(const json& p, std::uint64_t) {
  Outcome o;
  std::vector<Index> levels = p.at("levels").get<std::vector<Index>>();
  if (levels.empty()) throw std::invalid_argument("matrix_replay: empty level list");
  std::sort(levels.begin(), levels.end());
  const Index top = levels.back();
  o.result["null_families"] = json::array();
  for (const auto& f : matrix_lab::null_families()) {
    for (const auto& v : matrix_lab::replay_levels(f, levels)) {
      o.result["null_families"].push_back(matrix_lab::to_json(v));
      expect(o, v.a && *v.a <= 1e-10, "a != 0 for " + f.name + " at N = " + std::to_string(v.n));
      expect(o, !v.counterexample, "counterexample for " + f.name);
    }
    o.tables.push_back({"replay_" + f.name, matrix_lab::to_csv(f, top)});
  }
  o.result["controls"] = json::array();
  for (const auto& f : matrix_lab::control_families()) {
    o.result["controls"].push_back(matrix_lab::to_json(matrix_lab::matrix_closability_replay(f, top)));
  }
  o.result["d_omega"] = json::array();
  for (const auto& r : matrix_lab::d_omega_rules()) {
    const auto v = matrix_lab::d_omega_identification(r.name, r.rule, levels);
    json j = matrix_lab::to_json(v);
    j["expected"] = r.hs_finite;
    o.result["d_omega"].push_back(j);
    expect(o, v.member == r.hs_finite, "D_Omega identification wrong for " + r.name);
  }
  const auto b = matrix_lab::basel_diagnostic(top);
  o.result["basel"] = {{"N", b.n}, {"truncated", b.truncated}, {"exact", b.exact}, {"lower", b.lower}, {"upper", b.upper}};
  expect(o, b.lower <= b.truncated && b.truncated <= b.upper, "Basel bracket violated");
  return finish(std::move(o));
}

// --- op-topologies ------------------------------------------------------------

Outcome run_periodic(const json& p, std::uint64_t seed) {
  Outcome o;
  const int n_trunc = p.at("n_trunc");
  const int k_max = p.at("k_max");
  const int samples = p.at("samples");
  std::mt19937_64 rng(seed);

  std::vector<std::pair<ccr::TrigPoly, ccr::TrigPoly>> pairs;
  for (int i = 0; i < samples; ++i) {
    auto f = ccr::random_trig(rng, n_trunc / 2);
    pairs.emplace_back(std::move(f), ccr::random_trig(rng, n_trunc / 2));
  }
  std::ostringstream csv;
  csv << std::setprecision(12) << "k,samples,max_ratio,half_sample_max,stable\n";
  o.result["submultiplicativity"] = json::array();
  for (int k = 0; k <= k_max; ++k) {
    const auto r = ccr::submultiplicativity_probe(k, pairs, n_trunc);
    o.result["submultiplicativity"].push_back(
        {{"k", k}, {"max_ratio", r.max_ratio}, {"half_sample_max", r.half_sample_max}, {"stable", r.stable}});
    csv << k << ',' << r.samples << ',' << r.max_ratio << ',' << r.half_sample_max << ',' << r.stable << '\n';
    expect(o, r.stable, "submultiplicativity constant not stable at k = " + std::to_string(k));
  }
  o.tables.push_back({"submultiplicativity", csv.str()});

  double faithful = 0.0;
  double pairing_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto f = ccr::random_trig(rng, 3);
    const Vector u = ccr::fourier_vector(ccr::TrigPoly::constant(1.0), n_trunc);
    faithful = std::max(faithful, (ccr::multiplication_matrix(f, n_trunc) * u - ccr::fourier_vector(f, n_trunc)).norm());
    const auto eq = ccr::seminorm_equivalence(f, {ccr::random_trig(rng, 2), ccr::random_trig(rng, 2),
                                                  ccr::TrigPoly::constant(1.0)},
                                              n_trunc);
    pairing_gap = std::max(pairing_gap, std::abs(eq.operator_side - eq.pairing_side) / std::max(1.0, eq.pairing_side));
  }
  o.result["unit_image_residual"] = faithful;
  o.result["pairing_gap"] = pairing_gap;
  expect(o, faithful < 1e-12, "pi_o(f) u differs from f");
  expect(o, pairing_gap < 1e-10, "operator and pairing seminorms differ");

  const auto ordering = suites::topology_ordering(static_cast<std::size_t>(p.at("ordering_samples").get<int>()), seed);
  o.result["ordering"] = suites::to_json(ordering);
  expect(o, ordering.ok(), "topology ordering or involution invariance violated");
  return finish(std::move(o));
}

std::string slug(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '^') c = '_';
  }
  return s;
}

Outcome run_multiplication(const json& p, std::uint64_t) {
  using topo::Topology;
  Outcome o;
  const double q = p.at("p");
  const auto setup = fl::multiplication_setup(q, p.at("octaves").get<int>());

  const double s = fl::ls_exponent(q);
  o.result["s"] = s;
  o.result["ls_membership"] = json::array();
  for (double beta : p.at("betas")) {
    const auto v = fl::ls_membership(power(beta), q);
    json j = fl::to_json(v);
    j["beta"] = beta;
    o.result["ls_membership"].push_back(j);
    expect(o, v.ls.member == (beta * s < 1.0), "L^s membership wrong at beta = " + fmt(beta));
  }

  o.result["runs"] = json::object();
  for (const std::string tag : p.at("topologies")) {
    const Topology t = topo::parse_topology(tag);
    const auto runs = suites::extension_runs(setup, t);
    json arr = json::array();
    for (const auto& r : runs) {
      arr.push_back(suites::to_json(r));
      o.tables.push_back({"trace_" + tag + "_" + slug(r.target) + "_clamp", topo::trace_csv(r.clamp.result)});
      o.tables.push_back({"trace_" + tag + "_" + slug(r.target) + "_shift", topo::trace_csv(r.shift.result)});
      if (t == Topology::strongstar) {
        expect(o, r.clamp.result.converged && r.shift.result.converged, "strong* run diverges for " + r.target);
        expect(o, r.limit_gap && *r.limit_gap < 1e-6, "strong* limits differ for " + r.target);
      }
      if (t == Topology::uniform && !r.continuous) {
        expect(o, !r.clamp.result.converged && !r.shift.result.converged,
               "uniform run converges for the discontinuous target " + r.target);
      }
    }
    o.result["runs"][tag] = arr;
  }
  return finish(std::move(o));
}

// --- ccr-lab ------------------------------------------------------------------

Outcome run_ccr(const json& p, std::uint64_t seed) {
  Outcome o;
  const int triples = p.at("triples");
  const int deg = p.at("max_degree");
  const int freq = p.at("max_frequency");
  const int n_trunc = p.at("n_trunc");
  std::mt19937_64 rng(seed);

  int assoc = 0, anti = 0, invol = 0;
  for (int i = 0; i < triples; ++i) {
    const auto a = ccr::random_exact(rng, deg, freq);
    const auto b = ccr::random_exact(rng, deg, freq);
    const auto c = ccr::random_exact(rng, deg, freq);
    assoc += !(ccr::ccr_mul(ccr::ccr_mul(a, b), c) == ccr::ccr_mul(a, ccr::ccr_mul(b, c)));
    anti += !(ccr::ccr_star(ccr::ccr_mul(a, b)) == ccr::ccr_mul(ccr::ccr_star(b), ccr::ccr_star(a)));
    invol += !(ccr::ccr_star(ccr::ccr_star(a)) == a);
  }
  o.result["exact"] = {{"triples", triples}, {"associativity_failures", assoc},
                       {"star_product_failures", anti}, {"involution_failures", invol}};
  expect(o, assoc == 0 && anti == 0 && invol == 0, "exact algebra identities fail");

  std::ostringstream csv;
  csv << std::setprecision(12) << "sample,commutator_residual,product_residual,adjoint_residual\n";
  double comm = 0.0, hom = 0.0, adj = 0.0;
  const int numeric = p.at("numeric_samples");
  for (int i = 0; i < numeric; ++i) {
    const double c = ccr::commutator_residual(ccr::random_trig(rng, freq), n_trunc);
    const auto h = ccr::homomorphism_check(ccr::random_numeric(rng, deg, freq), ccr::random_numeric(rng, deg, freq),
                                           n_trunc);
    csv << i << ',' << c << ',' << h.product_residual << ',' << h.adjoint_residual << '\n';
    comm = std::max(comm, c);
    hom = std::max(hom, h.product_residual);
    adj = std::max(adj, h.adjoint_residual);
  }
  o.tables.push_back({"residuals", csv.str()});
  o.result["numeric"] = {{"n_trunc", n_trunc}, {"commutator_residual", comm}, {"product_residual", hom},
                         {"adjoint_residual", adj}};
  expect(o, comm < 1e-10, "commutation relation residual too large");
  expect(o, hom < 1e-10 && adj < 1e-10, "representation is not a *-homomorphism on the safe subspace");

  const double e1 = ccr::graph_seminorm(ccr::TrigPoly::mode(1), 1);
  o.result["graph_seminorm_e1_k1"] = e1;
  expect(o, std::abs(e1 - (1.0 + 4.0 * kPi * kPi)) < 1e-10, "||e_1||_1 differs from 1 + 4 pi^2");

  const auto pe = ccr::ccr_mul(ccr::CCRPolynomial::p(), ccr::CCRPolynomial::scalar(ccr::TrigPoly::mode(1)));
  o.result["p_times_e1"] = ccr::to_json(pe);

  int faithful = 0;
  for (int i = 0; i < 10; ++i) {
    const auto q = ccr::random_numeric(rng, deg, freq);
    if (!q.is_zero() && !ccr::faithfulness_probe(q, n_trunc).vanishes) ++faithful;
  }
  o.result["faithfulness_nonzero_images"] = faithful;
  expect(o, faithful == 10, "a nonzero polynomial has vanishing image on low modes");
  return finish(std::move(o));
}

// --- registry -----------------------------------------------------------------

std::vector<Operation> build_registry() {
  return {
      {"gns", "gns_construct", "GNS representation of a finite *-algebra with diagnostics",
       {{"algebra", "matrix"}, {"n", 2}, {"state", "trace"}}, run_gns},
      {"forms", "form_axioms", "hermiticity, positivity and Cauchy-Schwarz on random pairs",
       {{"contexts", {"finite", "lp", "matrix"}}, {"pairs", 1000}}, run_form_axioms},
      {"forms", "closability_equivalence", "closability verdicts for Omega, Omega* and Omega_B",
       {{"contexts", {"finite", "lp", "matrix"}}, {"matrix_n", 64}}, run_equivalence},
      {"function-lab", "lp_dichotomy", "tent witness on L^p and A_Omega membership of x^-beta",
       {{"witness_p", {1.0, 1.5, 2.0, 3.0}}, {"n_max", 1024}, {"membership_p", 1.0},
        {"betas", {0.25, 0.45, 0.55, 0.75}}},
       run_lp_dichotomy},
      {"function-lab", "weighted_dichotomy", "weighted form: classifier against the weighted tent witness",
       {{"cases", {{2.0, 0.5, 1.9}, {3.0, 0.6, 1.6}, {4.0, 0.25, 3.9}, {6.0, 0.3, 3.2}}}, {"n_max", 1024}},
       run_weighted},
      {"function-lab", "ls_membership", "L^s membership of x^-beta with probe cross-checks",
       {{"p", 4.0}, {"betas", {0.1, 0.2, 0.3, 0.4}}}, run_ls_membership},
      {"function-lab", "gaussian_probe", "closability probes for polynomials on L^1(R, e^{-x^2/2})",
       {{"families", {"x/n", "hermite", "constant"}}, {"nodes", 128}}, run_gaussian},
      {"matrix-lab", "matrix_replay", "null-family replay and D_Omega identification",
       {{"levels", {16, 32, 64, 128, 256}}}, run_matrix_replay},
      {"op-topologies", "periodic_multiplication", "multiplication on periodic smooth functions: seminorms and ordering",
       {{"n_trunc", 16}, {"k_max", 2}, {"samples", 200}, {"ordering_samples", 200}}, run_periodic},
      {"op-topologies", "multiplication_extension", "extension by closure of the multiplication representation",
       {{"p", 4.0}, {"octaves", 400}, {"betas", {0.1, 0.2, 0.3, 0.4}},
        {"topologies", {"strongstar", "uniform", "strong", "weak"}}},
       run_multiplication},
      {"ccr-lab", "ccr_suite", "exact CCR algebra identities and the Fourier representation",
       {{"triples", 100}, {"max_degree", 3}, {"max_frequency", 3}, {"n_trunc", 64}, {"numeric_samples", 20}},
       run_ccr},
  };
}

std::vector<Builtin> build_catalog() {
  auto make = [](std::string id, std::string title, std::string module, std::string op) {
    const auto* o = find_operation(module, op);
    Scenario s{id, std::move(module), std::move(op), o->defaults, id};
    return Builtin{std::move(id), std::move(title), std::move(s)};
  };
  return {
      make("ex2.6.1", "L^p over C([0,1]): unbounded closable form and A_Omega = L^2", "function-lab", "lp_dichotomy"),
      make("ex2.6.2", "weighted L^p form: s^-1 = p^-1 + (2r)^-1 classifier", "function-lab", "weighted_dichotomy"),
      make("ex2.6.3", "weighted matrices with the trace form", "matrix-lab", "matrix_replay"),
      make("ex3.2.1", "multiplication on periodic smooth functions", "op-topologies", "periodic_multiplication"),
      make("ex3.2.2", "canonical commutation relations", "ccr-lab", "ccr_suite"),
      make("ex3.8.1", "polynomials on L^1(R, e^{-x^2/2}): closable representation", "function-lab", "gaussian_probe"),
      make("ex3.8.2", "C([0,1]) on L^p: extension by closure and L^s", "op-topologies", "multiplication_extension"),
  };
}

// --- schema validation --------------------------------------------------------

bool same_kind(const json& want, const json& got) {
  if (want.is_number_integer()) return got.is_number_integer() || got.is_number_unsigned();
  if (want.is_number()) return got.is_number();
  if (want.is_string()) return got.is_string();
  if (want.is_boolean()) return got.is_boolean();
  if (want.is_array()) {
    if (!got.is_array()) return false;
    if (want.empty()) return true;
    for (const auto& g : got)
      if (!same_kind(want.front(), g)) return false;
    return true;
  }
  return want.type() == got.type();
}

std::string kind_name(const json& j) {
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_array()) return j.empty() ? "array" : "array of " + kind_name(j.front());
  return j.type_name();
}

Scenario parse_scenario(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "scenario must be an object");
  for (const auto& [key, value] : j.items()) {
    static const std::set<std::string> allowed = {"name", "module", "operation", "parameters", "output_path"};
    if (!allowed.count(key)) throw ConfigError(where + "." + key, "unknown field");
  }
  auto str = [&](const char* key, bool required) -> std::string {
    if (!j.contains(key)) {
      if (required) throw ConfigError(where + "." + key, "missing field");
      return {};
    }
    if (!j[key].is_string()) throw ConfigError(where + "." + key, "must be a string");
    return j[key].get<std::string>();
  };
  Scenario s;
  s.module = str("module", true);
  s.operation = str("operation", true);
  s.name = str("name", false);
  s.output_path = str("output_path", false);

  const auto mods = modules();
  if (std::find(mods.begin(), mods.end(), s.module) == mods.end()) {
    throw ConfigError(where + ".module", "unknown module '" + s.module + "'");
  }
  const Operation* op = find_operation(s.module, s.operation);
  if (!op) throw ConfigError(where + ".operation", "unknown operation '" + s.operation + "' in module " + s.module);
  if (s.name.empty()) s.name = s.operation;
  if (s.output_path.empty()) s.output_path = s.name;
  const std::filesystem::path out(s.output_path);
  if (out.is_absolute() || s.output_path.find("..") != std::string::npos) {
    throw ConfigError(where + ".output_path", "must be a relative path inside the output directory");
  }

  s.parameters = op->defaults;
  if (j.contains("parameters")) {
    const auto& params = j["parameters"];
    if (!params.is_object()) throw ConfigError(where + ".parameters", "must be an object");
    for (const auto& [key, value] : params.items()) {
      const std::string loc = where + ".parameters." + key;
      if (!op->defaults.contains(key)) throw ConfigError(loc, "unknown parameter for " + s.operation);
      if (!same_kind(op->defaults[key], value)) throw ConfigError(loc, "expected " + kind_name(op->defaults[key]));
      s.parameters[key] = value;
    }
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

const std::vector<Operation>& registry() {
  static const std::vector<Operation> r = build_registry();
  return r;
}

const Operation* find_operation(const std::string& module, const std::string& name) {
  for (const auto& op : registry())
    if (op.module == module && op.name == name) return &op;
  return nullptr;
}

std::vector<std::string> modules() {
  std::vector<std::string> m;
  for (const auto& op : registry())
    if (std::find(m.begin(), m.end(), op.module) == m.end()) m.push_back(op.module);
  return m;
}

Config parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "seed" && key != "scenarios") throw ConfigError(key, "unknown field");
  }
  Config c;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      throw ConfigError("seed", "must be a non-negative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("scenarios")) throw ConfigError("scenarios", "missing field");
  if (!j["scenarios"].is_array()) throw ConfigError("scenarios", "must be an array");
  std::set<std::string> outputs;
  for (std::size_t i = 0; i < j["scenarios"].size(); ++i) {
    const std::string where = "scenarios[" + std::to_string(i) + "]";
    auto s = parse_scenario(j["scenarios"][i], where);
    if (!outputs.insert(s.output_path).second) {
      throw ConfigError(where + ".output_path", "duplicate output path '" + s.output_path + "'");
    }
    c.scenarios.push_back(std::move(s));
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + "@byte " + std::to_string(e.byte), "malformed JSON");
  }
  return parse_config(j);
}

const std::vector<Builtin>& catalog() {
  static const std::vector<Builtin> c = build_catalog();
  return c;
}

const Builtin* find_builtin(const std::string& id) {
  for (const auto& b : catalog())
    if (b.id == id) return &b;
  return nullptr;
}

json catalog_json(const std::optional<std::string>& module) {
  json out = json::array();
  for (const auto& b : catalog()) {
    if (module && b.scenario.module != *module) continue;
    out.push_back({{"id", b.id},
                   {"title", b.title},
                   {"module", b.scenario.module},
                   {"operation", b.scenario.operation},
                   {"parameters", b.scenario.parameters}});
  }
  return out;
}

Outcome run_scenario(const Scenario& s, std::uint64_t seed) {
  const Operation* op = find_operation(s.module, s.operation);
  if (!op) throw ConfigError(s.name, "unknown operation '" + s.operation + "'");
  try {
    return op->run(s.parameters, seed);
  } catch (const std::exception& e) {
    Outcome o;
    o.failures.push_back(std::string("error: ") + e.what());
    return finish(std::move(o));
  }
}

Format parse_format(const std::string& tag) {
  if (tag == "csv") return Format::csv;
  if (tag == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + tag + "' (expected csv or json)");
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream s(l);
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  json rows = json::array();
  if (!std::getline(in, line)) return rows;
  const auto header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    json row = json::object();
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string cell = i < cells.size() ? cells[i] : std::string();
      if (cell.empty()) {
        row[header[i]] = nullptr;
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end && *end == '\0') row[header[i]] = v;
      else row[header[i]] = cell;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_outcome(const Scenario& s, const Outcome& o, std::uint64_t seed, const std::filesystem::path& out_dir,
                   Format format) {
  const auto dir = out_dir / s.output_path;
  json summary = {{"scenario", s.name},      {"module", s.module}, {"operation", s.operation},
                  {"parameters", s.parameters}, {"seed", seed},       {"passed", o.passed},
                  {"result", o.result}};
  json tables = json::array();
  for (const auto& t : o.tables) tables.push_back(slug(t.name) + (format == Format::csv ? ".csv" : ".json"));
  summary["tables"] = tables;
  write_atomic(dir / "summary.json", summary.dump(2) + "\n");
  for (const auto& t : o.tables) {
    if (format == Format::csv) write_atomic(dir / (slug(t.name) + ".csv"), t.csv);
    else write_atomic(dir / (slug(t.name) + ".json"), csv_to_json(t.csv).dump(2) + "\n");
  }
}

RunReport run_all(const std::vector<Scenario>& scenarios, std::uint64_t seed, const std::filesystem::path& out_dir,
                  Format format, unsigned jobs) {
  RunReport report;
  report.outcomes.resize(scenarios.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        auto o = run_scenario(scenarios[i], seed);
        write_outcome(scenarios[i], o, seed, out_dir, format);
        report.outcomes[i] = {scenarios[i].name, std::move(o)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return report;
}

}  // namespace quasistar::scenarios
