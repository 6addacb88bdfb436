/**
 * @file matrix_lab.hpp
 * @brief Infinite matrices with weight 1/(m^2 n^2), the trace form and its
 *        closability, on N x N truncations. Indices m, n are 1-based in
 *        entry rules and 0-based in storage.
 */

#pragma once

#include "quasistar/common.hpp"
#include "quasistar/forms.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace quasistar::matrix_lab {

/// Truncation levels used by the replay and membership tests.
inline const std::vector<Index> kLevels{16, 32, 64, 128, 256};

double weighted_norm(const Matrix& a);
double hs_norm(const Matrix& a);
/// Omega_o(A, B) = tr(B* A) = sum conj(b_mn) a_mn.
Complex trace_form(const Matrix& a, const Matrix& b);

/// The algebra has no unit: always throws MissingUnit.
[[noreturn]] void unit();

using EntryRule = std::function<Complex(Index m, Index n)>;
Matrix truncate(const EntryRule& rule, Index n);

/// Ambient weighted norm, trace form, adjoint, matrix product; no unit.
forms::FormContext<Matrix> trace_form_context();

struct MatrixFamily {
  std::string name;
  std::function<Matrix(double k, Index n)> member;
  bool null_family = true;  ///< expected weighted-null and HS-Cauchy
};

/// Weighted-null, HS-Cauchy families.
std::vector<MatrixFamily> null_families();
/// Weighted-null families that are not HS-Cauchy.
std::vector<MatrixFamily> control_families();

/// k = 1, 2, 4, ..., up to n.
std::vector<double> doubling_indices(Index n);

struct ReplayVerdict {
  std::string family;
  Index n = 0;
  forms::SequenceVerdict probe;
  bool weighted_null = false;
  bool hs_cauchy = false;
  std::optional<double> a;  ///< HS limit of Omega_o(A_k, A_k), present when HS-Cauchy
  double entry_residual = 0.0;  ///< max_{m,n} |a^k_mn|^2 at the last index
  bool counterexample = false;
};

ReplayVerdict matrix_closability_replay(const MatrixFamily& family, Index n);
/// One replay per truncation level, run concurrently.
std::vector<ReplayVerdict> replay_levels(const MatrixFamily& family, const std::vector<Index>& levels = kLevels);
nlohmann::json to_json(const ReplayVerdict& v);
/// Columns: k, weighted_norm, hs_norm, pairwise residual.
std::string to_csv(const MatrixFamily& family, Index n);

struct EntryRuleCase {
  std::string name;
  EntryRule rule;
  bool hs_finite = true;  ///< analytic classification
};

std::vector<EntryRuleCase> d_omega_rules();

struct DOmegaVerdict {
  std::string rule;
  std::vector<Index> levels;
  std::vector<double> hs_squared;
  std::optional<double> rate;
  bool member = false;
};

DOmegaVerdict d_omega_identification(const std::string& name, const EntryRule& rule,
                                     const std::vector<Index>& levels = kLevels);
nlohmann::json to_json(const DOmegaVerdict& v);

/// M = sum 1/(m^2 n^2) = (pi^2/6)^2 against the truncated sum with tail bounds
/// 1/(N+1) < pi^2/6 - sum_{m<=N} 1/m^2 < 1/N.
struct BaselDiagnostic {
  Index n = 0;
  double truncated = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double exact = 0.0;
};

BaselDiagnostic basel_diagnostic(Index n);

}  // namespace quasistar::matrix_lab
