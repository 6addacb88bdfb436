// Acceptance criteria: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "quasistar/algebra.hpp"
#include "quasistar/ccr.hpp"
#include "quasistar/function_lab.hpp"
#include "quasistar/gns.hpp"
#include "quasistar/matrix_lab.hpp"
#include "quasistar/suites.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace quasistar;
namespace fs = std::filesystem;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

function_lab::ScalarFn power(double beta) {
  return [beta](double x) { return Complex(std::pow(x, -beta), 0.0); };
}

Check gns_suite() {
  Check c;
  const auto t0 = Clock::now();
  const auto a = algebra::matrix_algebra(2);
  const std::pair<algebra::State, Index> cases[] = {{algebra::normalized_trace(a, 2), 4},
                                                    {algebra::first_entry_state(a, 2), 2}};
  for (const auto& [omega, rank] : cases) {
    const auto rep = gns::gns_construct(a, omega);
    const auto d = gns::verify_gns(a, omega, rep);
    c.require(rep.rank == rank, "rank " + std::to_string(rep.rank) + " != " + std::to_string(rank));
    c.require(d.ok(1e-10), "residuals exceed 1e-10");
    c.require(d.cyclicity_rank == rank, "cyclic vector does not span");
  }
  c.require(seconds_since(t0) < 1.0, "runtime >= 1 s");
  return c;
}

Check form_axioms() {
  Check c;
  for (auto suite : {suites::finite_axioms, suites::lp_axioms, suites::matrix_axioms}) {
    for (const auto& r : suite(1000, 0)) {
      c.require(r.report.pairs == 1000, r.context + ": pair count");
      c.require(r.report.ok(1e-10), r.context + ": axioms fail");
    }
  }
  return c;
}

Check equivalence() {
  Check c;
  auto reports = suites::finite_equivalence();
  reports.push_back(suites::lp_equivalence());
  const auto matrix = suites::matrix_equivalence(64);
  reports.push_back(matrix);
  for (const auto& r : reports) {
    c.require(r.all_agree(), r.context + ": verdicts disagree");
    for (const auto& row : r.rows) c.require(row.shifted.size() == 5, r.context + ": B suite size");
  }
  c.require(matrix.counterexamples() == 0, "matrix-lab counterexample");
  return c;
}

Check lp_dichotomy() {
  Check c;
  const auto t0 = Clock::now();
  for (double p : {1.0, 1.5}) c.require(function_lab::unboundedness_witness(p).exponent >= 0.2, "witness p < 2");
  for (double p : {2.0, 3.0}) c.require(function_lab::unboundedness_witness(p).exponent <= 0.05, "witness p >= 2");
  for (double beta : {0.25, 0.45, 0.55, 0.75}) {
    const auto v = function_lab::a_omega_membership(power(beta), 1.0);
    c.require(v.l2.member == (beta < 0.5), "membership beta = " + std::to_string(beta));
  }
  c.require(seconds_since(t0) < 10.0, "runtime >= 10 s");
  return c;
}

Check ls_identification() {
  Check c;
  for (double beta : {0.1, 0.2, 0.3, 0.4}) {
    const auto v = function_lab::ls_membership(power(beta), 4.0);
    c.require(v.ls.member == (beta * 4.0 < 1.0), "L^4 membership beta = " + std::to_string(beta));
  }
  const auto setup = function_lab::multiplication_setup(4.0, 400);
  const auto strongstar = suites::extension_runs(setup, topology::Topology::strongstar);
  for (const auto& r : strongstar)
    c.require(r.clamp.result.converged && r.shift.result.converged, "strong* run diverges: " + r.target);
  const auto uniform = suites::extension_runs(setup, topology::Topology::uniform);
  bool found = false;
  for (const auto& r : uniform) {
    if (r.continuous) continue;
    found = true;
    c.require(!r.clamp.result.converged && !r.shift.result.converged, "uniform run converges: " + r.target);
  }
  c.require(found, "no discontinuous target");
  return c;
}

Check matrix_replay() {
  Check c;
  for (const auto& f : matrix_lab::null_families()) {
    const auto v = matrix_lab::matrix_closability_replay(f, 256);
    c.require(v.a && *v.a <= 1e-10, f.name + ": a != 0");
    c.require(!v.counterexample, f.name + ": counterexample");
  }
  const auto rules = matrix_lab::d_omega_rules();
  c.require(rules.size() == 6, "entry-rule count");
  for (const auto& r : rules)
    c.require(matrix_lab::d_omega_identification(r.name, r.rule).member == r.hs_finite, "D_Omega: " + r.name);
  return c;
}

Check ccr_suite() {
  using namespace quasistar::ccr;
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(0);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_exact(rng, 3, 3);
    const auto b = random_exact(rng, 3, 3);
    const auto d = random_exact(rng, 3, 3);
    c.require(ccr_mul(ccr_mul(a, b), d) == ccr_mul(a, ccr_mul(b, d)), "associativity");
    c.require(ccr_star(ccr_mul(a, b)) == ccr_mul(ccr_star(b), ccr_star(a)), "involution");
  }
  for (int i = 0; i < 20; ++i) c.require(commutator_residual(random_trig(rng, 3), 64) < 1e-10, "commutator");
  c.require(std::abs(graph_seminorm(TrigPoly::mode(1), 1) - (1.0 + 4.0 * kPi * kPi)) < 1e-10, "graph seminorm");
  c.require(seconds_since(t0) < 5.0, "runtime >= 5 s");
  return c;
}

Check ordering() {
  Check c;
  const auto r = suites::topology_ordering(200, 0);
  c.require(r.samples == 200, "sample count");
  c.require(r.ok(1e-12), "ordering or involution invariance violated");
  return c;
}

Check well_definedness() {
  Check c;
  const auto runs = suites::extension_runs(function_lab::multiplication_setup(4.0, 400), topology::Topology::strongstar);
  c.require(runs.size() == 3, "target count");
  for (const auto& r : runs) c.require(r.limit_gap && *r.limit_gap < 1e-6, "limit gap: " + r.target);
  return c;
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), root).string()] = s.str();
  }
  return files;
}

Check cli_replicate() {
  Check c;
  const auto t0 = Clock::now();
  const fs::path base = fs::current_path() / "acceptance_cli";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + QUASISTAR_CLI + "\" replicate all --out-dir \"" +
                            (base / run).string() + "\" > \"" + (base.string() + "_" + run + ".log") + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    c.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, std::string("run ") + run + " exit status");
  }
  c.require(seconds_since(t0) < 60.0, "runtime >= 60 s");
  if (c.ok) {
    const auto a = tree(base / "a");
    c.require(a.size() >= 7, "missing outputs");
    c.require(a == tree(base / "b"), "outputs differ between runs");
  }
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"1 gns suite", gns_suite},
      {"2 form axioms", form_axioms},
      {"3 closability equivalence", equivalence},
      {"4 L^p dichotomy", lp_dichotomy},
      {"5 L^s identification and extension", ls_identification},
      {"6 matrix replay", matrix_replay},
      {"7 CCR suite", ccr_suite},
      {"8 topology ordering", ordering},
      {"9 extension well-definedness", well_definedness},
      {"10 CLI replicate", cli_replicate},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = Clock::now();
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS " : "FAIL ") << name << "  (" << seconds_since(t0) << " s)\n";
    for (const auto& n : c.notes) std::cout << "     " << n << '\n';
    if (!c.ok) ++failed;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " of 10 failing\n";
  return failed ? 1 : 0;
}
