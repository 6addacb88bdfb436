/**
 * @file suites.hpp
 * @brief Built-in probe suites shared by the scenarios, tests and the
 *        acceptance runner.
 */

#pragma once

#include "quasistar/forms.hpp"
#include "quasistar/function_lab.hpp"
#include "quasistar/topology.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace quasistar::suites {

// --- closability equivalence under Omega, Omega*, Omega_B ---------------------

/// (M2, tr/2) and (M2, pure state) on coefficient vectors.
std::vector<forms::EquivalenceReport> finite_equivalence();
/// L^1([0,1]) over C([0,1]) on the uniform Simpson grid.
forms::EquivalenceReport lp_equivalence();
/// Weighted matrices with the trace form, truncated at n.
forms::EquivalenceReport matrix_equivalence(Index n = 64);

// --- form axioms on random pairs ---------------------------------------------

struct LabelledAxioms {
  std::string context;
  forms::AxiomReport report;
};

std::vector<LabelledAxioms> finite_axioms(std::size_t pairs, std::uint64_t seed);
std::vector<LabelledAxioms> lp_axioms(std::size_t pairs, std::uint64_t seed);
std::vector<LabelledAxioms> matrix_axioms(std::size_t pairs, std::uint64_t seed);
nlohmann::json to_json(const LabelledAxioms& a);

// --- topology ordering ----------------------------------------------------------

struct OrderingReport {
  std::size_t samples = 0;
  /// max over samples of (lower - upper) / max(1, upper) along weak <= strong <= strong* <= uniform.
  double ordering_excess = 0.0;
  double uniform_involution = 0.0;
  double strongstar_involution = 0.0;
  double weak_involution = 0.0;

  bool ok(double tol = 1e-12) const {
    return ordering_excess <= tol && uniform_involution <= tol && strongstar_involution <= tol &&
           weak_involution <= tol;
  }
};

/// Random operators on the Fourier truncation (dense, CCR images, diagonal)
/// paired with random graph-norm balls; phi and psi are drawn from the ball.
OrderingReport topology_ordering(std::size_t samples, std::uint64_t seed, int n_trunc = 8);
nlohmann::json to_json(const OrderingReport& r);

// --- extension by closure on the multiplication representation ---------------

struct TargetRun {
  std::string target;
  bool continuous = true;
  function_lab::OperatorRun clamp;
  function_lab::OperatorRun shift;
  /// max suite seminorm of the difference of the two limits, when both converge.
  std::optional<double> limit_gap;
};

/// x^{-0.1}, x^{-0.2} and cos(2 pi log2 x), each via clamp and shift sequences.
std::vector<TargetRun> extension_runs(const function_lab::MultiplicationSetup& setup, topology::Topology t);
nlohmann::json to_json(const TargetRun& r);

}  // namespace quasistar::suites
