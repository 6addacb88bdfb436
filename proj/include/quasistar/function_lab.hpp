/**
 * @file function_lab.hpp
 * @brief Abelian example suites on quadrature grids: L^p([0,1]) over C([0,1])
 *        and the polynomial algebra on L^1(R, e^{-x^2/2} dx).
 *
 * Grids:
 *   uniform_simpson    composite Simpson on [0,1], default 4097 nodes
 *   graded_simpson     x = t^q with Simpson in t; resolves x^{-beta} at 0
 *   geometric_simpson  Simpson cells on dyadic octaves [2^{-o-1}, 2^{-o}]
 *   gauss_hermite      Golub-Welsch nodes for the weight e^{-x^2/2}
 *
 * Membership verdicts compare integrals across grid doublings: with
 * d_k = I_{k+1} - I_k the rate log2(|d_{k+1}| / |d_k|) is negative for a
 * finite integral and >= 0 for a divergent one.
 */

#pragma once

#include "quasistar/common.hpp"
#include "quasistar/forms.hpp"
#include "quasistar/topology.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace quasistar::function_lab {

enum class GridKind { uniform_simpson, graded_simpson, geometric_simpson, gauss_hermite };

struct Grid {
  GridKind kind = GridKind::uniform_simpson;
  RealVector nodes;
  RealVector weights;
  double total_mass = 1.0;  ///< interval length or Gaussian mass
  double offset = 0.0;      ///< evaluation point used for a singular node at 0

  Index size() const noexcept { return nodes.size(); }
  std::string tag() const;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr uniform_simpson(Index n_nodes = 4097);
GridPtr graded_simpson(Index panels, double grading = 4.0);
/// x_min = 2^{-octaves}; weights sum to 1 - x_min.
GridPtr geometric_simpson(int octaves, int cells_per_octave = 2);
GridPtr gauss_hermite(Index n_nodes = 128);

using ScalarFn = std::function<Complex(double)>;

class GridFunction {
 public:
  GridFunction(GridPtr grid, Vector values);
  /// Samples fn at the nodes; a non-finite value at x = 0 is replaced by fn(offset).
  static GridFunction sample(GridPtr grid, const ScalarFn& fn);
  static GridFunction constant(GridPtr grid, Complex c);

  const GridPtr& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  Index n_nodes() const noexcept { return values_.size(); }

  GridFunction conj() const;
  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(Complex s, const GridFunction& a);

 private:
  GridPtr grid_;
  Vector values_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where);

/// Quadrature value of the integral of f.
Complex integrate(const GridFunction& f);
double lp_norm(const GridFunction& f, double p);

/// Integral of f conj(g) w (w = 1 when absent).
Complex omega_form(const GridFunction& f, const GridFunction& g);
Complex omega_form(const GridFunction& f, const GridFunction& g, const GridFunction& w);

// --- closed-form families -----------------------------------------------------

struct TestFamily {
  std::string generator;
  std::vector<double> parameters;
  std::function<ScalarFn(double n)> member;
};

/// n^h * max(0, 1 - n x): supported on [0, 1/n].
TestFamily tent_family(double height_exponent);
/// x^{-beta} (parameter n ignored).
TestFamily power_function(double beta);
/// cos(2 pi n x).
TestFamily trig_family();

// --- L^p forms: boundedness dichotomy ---------------------------------------

enum class Boundedness { bounded, closable_unbounded };
std::string to_string(Boundedness b);

struct Classification {
  Boundedness tag = Boundedness::bounded;
  double s = 0.0;  ///< effective exponent, s = p unweighted
};

/// s^{-1} = p^{-1} + (2r)^{-1} for a weight in L^r; bounded iff s >= 2.
Classification boundedness_classifier(double p, std::optional<double> r = std::nullopt);

struct WitnessRow {
  double n = 0.0;
  double lp_norm = 0.0;
  double form = 0.0;
  double ratio = 0.0;
};

struct WitnessTable {
  double p = 0.0;
  std::vector<WitnessRow> rows;
  double exponent = 0.0;  ///< least-squares slope of log ratio vs log n
};

/// Tent family of height n^{1/2}, width 1/n, n = 2, 4, ..., n_max.
/// p >= 2 runs as the bounded control case.
WitnessTable unboundedness_witness(double p, int n_max = 1024, Index n_nodes = 4097);
/// Same tent family under the weighted form with w(x) = x^{-gamma}; the ratio
/// exponent is gamma + 2/p - 1.
WitnessTable weighted_witness(double p, double gamma, int n_max = 1024, Index n_nodes = 4097);
std::string to_csv(const WitnessTable& t);
nlohmann::json to_json(const WitnessTable& t);

struct RefinementVerdict {
  bool member = false;
  std::optional<double> rate;  ///< nullopt when the increments vanish
  std::vector<double> values;  ///< integral per level
};

/// Integral of g on graded grids with panels 2^first .. 2^last.
RefinementVerdict refinement_test(const ScalarFn& g, int first_level = 6, int last_level = 12);

struct MembershipVerdict {
  double p = 0.0;
  RefinementVerdict l2;
};

/// A_Omega = L^2: membership iff the L^2 integral is refinement stable.
MembershipVerdict a_omega_membership(const ScalarFn& f, double p);

struct CrossCheck {
  double alpha = 0.0;
  RefinementVerdict product;  ///< integral of |f x^{-alpha}|^2
};

struct LsVerdict {
  double p = 0.0;
  double s = 0.0;
  RefinementVerdict ls;
  std::vector<CrossCheck> cross;
  bool cross_validated = false;
};

double ls_exponent(double p);
/// Probes phi = x^{-alpha}, alpha = 1/p - delta for delta in {1e-2, 1e-3}.
LsVerdict ls_membership(const ScalarFn& f, double p);
nlohmann::json to_json(const LsVerdict& v);

/// Form contexts for the L^p examples: ambient L^p norm, Omega_o with optional weight.
forms::FormContext<GridFunction> lp_form_context(GridPtr grid, double p,
                                                 std::optional<GridFunction> weight = std::nullopt);

// --- Gaussian space -----------------------------------------------------------

struct GaussianProbeRow {
  int index = 0;
  double l1_norm = 0.0;
  std::vector<double> seminorms;  ///< sup_x |f_j(x)^2 p_n(x)| over the grid, j = 1..4
};

struct GaussianProbeVerdict {
  std::string family;
  bool applicable = false;  ///< L^1 norms tend to zero
  bool reps_cauchy = false;
  double limit_seminorm = 0.0;
  bool counterexample = false;
  std::vector<GaussianProbeRow> rows;
};

/// Coefficient lists (monomial basis, lowest degree first) of p_1, p_2, ....
/// A is multiplication by x on the Gauss-Hermite grid; the tau^D seminorms use
/// f_j(x) = (1 + x^2)^{-j}, j = 1..4.
GaussianProbeVerdict gaussian_poly_probe(std::string family, const std::vector<std::vector<Complex>>& coeffs,
                                         Index n_nodes = 128);
nlohmann::json to_json(const GaussianProbeVerdict& v);

/// Probabilists' Hermite polynomial He_n in the monomial basis.
std::vector<Complex> hermite_coefficients(int n);

// --- multiplication representation --------------------------------------------

/// Multiplication representation of C([0,1]) on D = L^p, a subspace of L^2,
/// truncated to a geometric grid.
struct MultiplicationSetup {
  GridPtr grid;
  double p = 4.0;
  topology::TruncatedTriple triple;
  std::vector<topology::BoundedSet> suite;
  Matrix probes;  ///< x^{-alpha}, alpha in {0, 0.1, 0.2}, and cos(2 pi k x), k = 1, 2

  topology::TruncatedOperator mult(const GridFunction& f) const;
  topology::TruncatedOperator mult(const ScalarFn& f) const;
  topology::SeminormFamily family(topology::Topology t) const;
};

/// Bounded sets: unit-L^2 indicators of [0, 2^{-j}] and trigonometric vectors.
MultiplicationSetup multiplication_setup(double p = 4.0, int octaves = 400);

/// Approximating sequences for a target f in L^s.
struct Approximation {
  std::string name;
  ScalarFn target;
  std::vector<ScalarFn> members;
};

/// Cutoffs eps_k = 2^{-step k}, k = 1..steps.
std::vector<double> dyadic_cutoffs(int steps, int step);

/// f(max(x, eps)) and f(x + eps).
Approximation clamp_approximation(std::string name, ScalarFn f, const std::vector<double>& cutoffs);
Approximation shift_approximation(std::string name, ScalarFn f, const std::vector<double>& cutoffs);

/// cos(2 pi log2 x): bounded, continuous on (0,1], no limit at 0.
ScalarFn log_oscillation();

struct OperatorRun {
  topology::ExtensionResult result;
  std::vector<double> ambient;  ///< ||f_n - f||_1
};

OperatorRun run_extension(const MultiplicationSetup& setup, const Approximation& approx, topology::Topology t);

}  // namespace quasistar::function_lab
