/**
 * @file algebra.hpp
 * @brief Finite-dimensional *-algebras given by structure constants, their
 *        elements, and states.
 *
 * A StarAlgebra of dimension d is fixed by the product table
 *   e_i e_j = sum_k c[i][j][k] e_k
 * and the involution matrix S with (e_i)* = sum_j S[i][j] e_j. The unit is
 * optional: the weighted infinite-matrix example has none, and any operation
 * that needs it throws MissingUnit.
 */

#pragma once

#include "quasistar/common.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <vector>

namespace quasistar::algebra {

class StarAlgebra;

/// Coefficient vector over the basis of a StarAlgebra.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(Vector coeffs) : coeffs_(std::move(coeffs)) {}

  const Vector& coeffs() const noexcept { return coeffs_; }
  Index dim() const noexcept { return coeffs_.size(); }
  Complex operator[](Index i) const { return coeffs_(i); }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(Complex s, const AlgebraElement& a) {
    return AlgebraElement(s * a.coeffs_);
  }

 private:
  Vector coeffs_;
};

class StarAlgebra {
 public:
  /// structure[i](k, j) = c[i][j][k], i.e. structure[i] is left multiplication by e_i.
  /// Throws std::invalid_argument if associativity, the anti-automorphism
  /// property of the involution, or the unit law fails (relative tol 1e-10).
  StarAlgebra(std::vector<Matrix> left_multiplication, Matrix involution,
              std::optional<Vector> unit = std::nullopt);

  /// Build from a dense rank-3 tensor c[i][j][k].
  static StarAlgebra from_structure_constants(
      const std::vector<std::vector<std::vector<Complex>>>& c, Matrix involution,
      std::optional<Vector> unit = std::nullopt);

  Index dim() const noexcept { return static_cast<Index>(left_.size()); }
  Complex structure_constant(Index i, Index j, Index k) const { return left_[i](k, j); }
  const Matrix& left_multiplication(Index i) const { return left_.at(static_cast<size_t>(i)); }
  const Matrix& involution_matrix() const noexcept { return involution_; }

  bool has_unit() const noexcept { return unit_.has_value(); }
  AlgebraElement unit() const;
  AlgebraElement basis(Index i) const;
  AlgebraElement zero() const { return AlgebraElement(Vector::Zero(dim())); }
  AlgebraElement element(Vector coeffs) const;

  AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) const;
  AlgebraElement star(const AlgebraElement& a) const;

  /// Matrix of X -> aX in coefficient space.
  Matrix left_matrix(const AlgebraElement& a) const;

  double associativity_residual() const;
  /// max |star(star(e_i)) - e_i| and max |(e_i e_j)* - e_j* e_i*|.
  double involution_residual() const;
  /// max |I e_i - e_i|, |e_i I - e_i|; 0 when there is no unit.
  double unit_residual() const;

 private:
  void check(const AlgebraElement& a, const char* where) const;

  std::vector<Matrix> left_;
  Matrix involution_;
  std::optional<Vector> unit_;
};

/// Linear functional omega(e_i) on a StarAlgebra, checked for hermiticity and
/// positivity (Gram eigenvalues >= -1e-10) on construction.
class State {
 public:
  State(const StarAlgebra& algebra, Vector functional);

  const Vector& functional() const noexcept { return functional_; }
  Index dim() const noexcept { return functional_.size(); }
  bool normalized() const noexcept { return normalized_; }

  Complex operator()(const AlgebraElement& a) const;

 private:
  Vector functional_;
  bool normalized_ = false;
};

inline constexpr double kPositivityTolerance = 1e-10;

/// G_ij = omega(e_i* e_j). No positivity check.
Matrix gram_matrix(const StarAlgebra& algebra, const Vector& functional);

Complex evaluate_state(const State& omega, const AlgebraElement& a);

// --- standard algebras and states -----------------------------------------

/// M_n(C) with matrix-unit basis E_ij at index i*n + j.
StarAlgebra matrix_algebra(int n);
/// The one-dimensional algebra C.
StarAlgebra complex_numbers();
/// Group algebra of Z_k: e_g e_h = e_{g+h}, e_g* = e_{-g}.
StarAlgebra cyclic_group_algebra(int k);

/// Index of E_ij in matrix_algebra(n).
inline Index matrix_unit(int n, int i, int j) { return static_cast<Index>(i) * n + j; }
/// Coefficients of a dense n x n matrix in the matrix-unit basis.
AlgebraElement from_matrix(const StarAlgebra& mn, const Matrix& m);
Matrix to_matrix(const AlgebraElement& a, int n);

State normalized_trace(const StarAlgebra& mn, int n);
/// omega(A) = tr(rho A) for a density matrix rho.
State density_state(const StarAlgebra& mn, const Matrix& rho);
/// omega(A) = A_00, the vector state of the first basis vector.
State first_entry_state(const StarAlgebra& mn, int n);
/// Canonical trace on the group algebra, omega(e_g) = delta_{g,0}.
State group_trace(const StarAlgebra& zk);

// --- structured text format -------------------------------------------------

nlohmann::json to_json(const StarAlgebra& algebra);
StarAlgebra algebra_from_json(const nlohmann::json& j);
nlohmann::json to_json(const State& state);
State state_from_json(const StarAlgebra& algebra, const nlohmann::json& j);

}  // namespace quasistar::algebra
