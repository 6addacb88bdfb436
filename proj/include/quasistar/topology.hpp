/**
 * @file topology.hpp
 * @brief Truncated rigged Hilbert spaces, the four operator topologies as
 *        seminorm families, and extension of representations by closure.
 *
 * A TruncatedTriple models D_N in H with a diagonal inner product (quadrature
 * weights, or 1 for an orthonormal basis) and graph weights w_n >= 1; the
 * seminorms of the graph topology are ||phi||_k = ||diag(w)^k phi|| and the
 * dual proxy D'_N pairs through the inverse weights.
 *
 * Seminorms of A on a finite bounded set M are all read off the pairing
 * matrix C_ij = <A m_j, m_i>:
 *   uniform   sup_{i,j} |C_ij|
 *   strong    sup_i |<A phi, m_i>|                   (phi a probe vector)
 *   strong*   max of the strong seminorms of A and A^dagger
 *   weak      |<A phi, psi>|
 */

#pragma once

#include "quasistar/common.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace quasistar::topology {

enum class Topology { uniform, strong, strongstar, weak };

Topology parse_topology(std::string_view tag);
std::string_view to_string(Topology t);

class TruncatedTriple {
 public:
  TruncatedTriple(RealVector metric, RealVector graph_weights);
  /// Orthonormal basis with unit graph weights.
  static TruncatedTriple euclidean(Index dim);

  Index dim() const noexcept { return metric_.size(); }
  const RealVector& metric() const noexcept { return metric_; }
  const RealVector& graph_weights() const noexcept { return graph_weights_; }

  /// <u, v>, linear in u.
  Complex inner(const Vector& u, const Vector& v) const;
  double norm(const Vector& v) const;
  /// ||diag(w)^k v||.
  double graph_seminorm(const Vector& v, int k) const;
  /// ||diag(w)^{-k} v||: the dual-side norm for elements of D'_N.
  double dual_seminorm(const Vector& v, int k) const;

 private:
  RealVector metric_;
  RealVector graph_weights_;
};

/// Element of L(D_N, D'_N) with its inner-product adjoint. Diagonal operators
/// (multiplication operators on grids) keep diagonal storage.
class TruncatedOperator {
 public:
  TruncatedOperator(const TruncatedTriple& triple, Matrix matrix);
  static TruncatedOperator diagonal(const TruncatedTriple& triple, Vector diag);
  static TruncatedOperator zero(const TruncatedTriple& triple);
  static TruncatedOperator identity(const TruncatedTriple& triple);

  Index dim() const noexcept { return metric_.size(); }
  bool is_diagonal() const noexcept { return diagonal_.has_value(); }
  const RealVector& metric() const noexcept { return metric_; }

  Vector apply(const Vector& v) const;
  Vector apply_adjoint(const Vector& v) const;
  /// Columns A m_j.
  Matrix apply(const Matrix& m) const;
  Matrix apply_adjoint(const Matrix& m) const;

  TruncatedOperator adjoint() const;
  Matrix dense() const;
  Matrix dense_adjoint() const;

  /// max |<A u, v> - <u, A^dagger v>| over basis vectors.
  double adjoint_residual() const;

  friend TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b);
  friend TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b);
  friend TruncatedOperator operator*(Complex s, const TruncatedOperator& a);
  /// Composition a * b on the truncation.
  friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);

 private:
  TruncatedOperator(RealVector metric, std::optional<Matrix> dense, std::optional<Vector> diagonal);
  static void require_compatible(const TruncatedOperator& a, const TruncatedOperator& b);

  RealVector metric_;
  std::optional<Matrix> dense_;
  std::optional<Matrix> dense_adjoint_;
  std::optional<Vector> diagonal_;
};

/// Finite, named stand-in for a bounded subset M of D.
struct BoundedSet {
  std::string name;
  Matrix vectors;  ///< columns are the elements of M

  Index size() const noexcept { return vectors.cols(); }
};

/// Random vectors normalized to ||phi||_k = 1, deterministic in the seed.
BoundedSet sample_graph_ball(const TruncatedTriple& triple, int k, int count, std::uint64_t seed,
                             std::string name = {});
/// Default suite: graph-norm balls at k = 0, 1, 2 with 8 vectors each.
std::vector<BoundedSet> default_suite(const TruncatedTriple& triple, std::uint64_t seed);

/// C_ij = <A m_j, n_i> for columns m_j of cols, n_i of rows.
Matrix pairing_matrix(const TruncatedOperator& a, const TruncatedTriple& triple, const Matrix& cols,
                      const Matrix& rows);

double seminorm(const TruncatedOperator& a, const TruncatedTriple& triple, Topology topology,
                const BoundedSet& m, const std::optional<Vector>& phi = std::nullopt,
                const std::optional<Vector>& psi = std::nullopt);

/// max{ ||A f||, ||A^dagger f|| } in the Hilbert norm.
double strongstar_hilbert_seminorm(const TruncatedOperator& a, const TruncatedTriple& triple, const Vector& f);

/// A finite family of seminorms {p_j} standing in for one operator topology.
struct SeminormFamily {
  std::string name;
  Topology topology = Topology::uniform;
  std::vector<std::string> labels;
  std::function<std::vector<double>(const TruncatedOperator&)> evaluate;
};

/// Seminorms of `topology` over the bounded-set suite. Probe vectors play
/// phi (strong, strong*) or both phi and psi (weak). Strong and strong*
/// also carry the Hilbert-norm seminorms ||A phi|| / max{||A phi||, ||A^dagger phi||},
/// the suprema over the unit ball of H subset D'.
SeminormFamily make_family(const TruncatedTriple& triple, Topology topology, std::vector<BoundedSet> suite,
                           Matrix probes);

// --- extension by closure -----------------------------------------------------

enum class Membership {
  none,             ///< no ambient tau-limit or no operator convergence
  extended,         ///< A(pi, tau_op): limit stays in the bounded operator space
  completion_only,  ///< A~(pi, tau_op): operator Cauchy only, limit unbounded
};

std::string_view to_string(Membership m);

struct ExtensionOptions {
  std::size_t window = 5;
  double cauchy_tolerance = 1e-8;  ///< relative to the largest seminorm seen
  double growth_factor = 2.0;      ///< uniform-size growth marking an unbounded limit
};

struct ExtensionResult {
  bool converged = false;
  std::optional<TruncatedOperator> limit;
  Topology topology = Topology::uniform;
  Membership membership = Membership::none;
  bool ambient_converged = false;
  double scale = 0.0;
  std::vector<std::string> labels;
  /// residual_trace[step][j] = p_j(A_step - A_{step-1}), step >= 1.
  std::vector<std::vector<double>> residual_trace;
  /// max_j p_j(A_step), step >= 0.
  std::vector<double> size_trace;
};

/// @param ambient_distances ||X_n - X||_tau for the proposed limit element X.
/// @param bounded_size      optional size functional of an operator (e.g. its
///                          uniform seminorm on localized vectors); growth by
///                          more than growth_factor across the run marks the
///                          limit as unbounded.
ExtensionResult extend_by_closure(const std::vector<double>& ambient_distances,
                                  const std::vector<TruncatedOperator>& reps, const SeminormFamily& family,
                                  const std::function<double(const TruncatedOperator&)>& bounded_size = {},
                                  const ExtensionOptions& options = {});

nlohmann::json to_json(const ExtensionResult& r);
/// Columns: step, one per seminorm label.
std::string trace_csv(const ExtensionResult& r);

// --- closability of the representation ---------------------------------------

struct NullFamily {
  std::string name;
  std::vector<double> ambient_norms;  ///< ||X_n||_tau
  std::vector<TruncatedOperator> reps;
};

struct FamilyClosability {
  std::string family;
  bool tau_null = false;
  bool reps_cauchy = false;
  double limit_seminorm = 0.0;  ///< max seminorm of the final iterate
  bool counterexample = false;
};

struct ClosabilityVerdict {
  std::vector<FamilyClosability> families;
  bool counterexample_found() const {
    for (const auto& f : families)
      if (f.counterexample) return true;
    return false;
  }
};

inline constexpr double kLimitZeroThreshold = 1e-6;

ClosabilityVerdict closability_check(const std::vector<NullFamily>& families, const SeminormFamily& family,
                                     const ExtensionOptions& options = {});
nlohmann::json to_json(const ClosabilityVerdict& v);

// --- quasi *-algebra closure ------------------------------------------------

struct ClosureSample {
  std::string name;
  std::vector<TruncatedOperator> reps;  ///< pi_o(X_n) approximating pi(X)
};

struct ClosureRow {
  std::string sample;
  std::string element;
  bool right_product_cauchy = false;
  std::optional<bool> involution_cauchy;  ///< nullopt when skipped (strong topology)
};

struct ClosureReport {
  bool bounded_branch = false;  ///< all pi_o(B) have finite operator norm
  bool involution_skipped = false;
  std::vector<ClosureRow> rows;

  bool all_stable() const {
    for (const auto& r : rows) {
      if (!r.right_product_cauchy) return false;
      if (r.involution_cauchy && !*r.involution_cauchy) return false;
    }
    return true;
  }
};

ClosureReport quasi_algebra_closure_test(const std::vector<ClosureSample>& samples,
                                         const std::vector<std::pair<std::string, TruncatedOperator>>& ao_elements,
                                         const SeminormFamily& family, const ExtensionOptions& options = {});
nlohmann::json to_json(const ClosureReport& r);

/// Operator norm of A on (D_N, <.,.>) via the largest singular value.
double operator_norm(const TruncatedOperator& a);

}  // namespace quasistar::topology
