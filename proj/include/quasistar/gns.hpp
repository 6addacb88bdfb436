/**
 * @file gns.hpp
 * @brief GNS construction for a state on a finite-dimensional *-algebra.
 *
 * The quotient A_o / N_omega is realized through the eigendecomposition of the
 * Gram matrix G_ij = omega(e_i* e_j). Eigenvalues above 1e-10 * lambda_max span
 * the quotient; the rest span the null ideal N_omega in coordinates.
 */

#pragma once

#include "quasistar/algebra.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace quasistar::gns {

inline constexpr double kRankThreshold = 1e-10;

struct GnsRep {
  Matrix gram;
  /// dim x rank; column r holds algebra coordinates of a representative of
  /// the r-th orthonormal quotient vector.
  Matrix quotient_basis;
  /// rank x dim; maps algebra coordinates x to the quotient coordinates of lambda(x).
  Matrix coordinate_map;
  /// rep_matrices[i] is pi(e_i) on the quotient, rank x rank.
  std::vector<Matrix> rep_matrices;
  /// Quotient coordinates of lambda(I).
  Vector cyclic_vector;
  Index rank = 0;

  /// pi(a) for an arbitrary element, as a linear combination of rep_matrices.
  Matrix represent(const algebra::AlgebraElement& a) const;
};

/// Order in which Gram eigenvectors are laid out in the quotient basis.
enum class Ordering { descending, ascending };

struct Diagnostics {
  double homomorphism_residual = 0.0;
  double adjoint_residual = 0.0;
  Index cyclicity_rank = 0;
  double state_residual = 0.0;
  /// <lambda(e_i), lambda(e_j)> = omega(e_j* e_i) reproduced by coordinates.
  double inner_product_residual = 0.0;

  bool ok(double tol = 1e-10) const {
    return homomorphism_residual < tol && adjoint_residual < tol && state_residual < tol &&
           inner_product_residual < tol;
  }
};

/// G_ij = omega(e_i* e_j); throws NotPositive carrying the offending eigenvalue.
Matrix build_gram(const algebra::StarAlgebra& algebra, const algebra::State& omega);

/// Needs a unit and a normalized state.
GnsRep gns_construct(const algebra::StarAlgebra& algebra, const algebra::State& omega,
                     Ordering ordering = Ordering::descending);

Diagnostics verify_gns(const algebra::StarAlgebra& algebra, const algebra::State& omega,
                       const GnsRep& rep);

/// Numerical rank of a Hermitian PSD matrix at the relative threshold above.
Index numerical_rank(const Matrix& hermitian);

nlohmann::json to_json(const GnsRep& rep);
GnsRep gns_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Diagnostics& d);

}  // namespace quasistar::gns
