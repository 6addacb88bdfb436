#include "quasistar/gns.hpp"

#include "quasistar/json_io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace quasistar::gns {

using algebra::AlgebraElement;
using algebra::StarAlgebra;
using algebra::State;

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Largest-magnitude component real positive (first index wins ties).
void fix_phase(Eigen::Ref<Vector> v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) * (1.0 + 1e-12)) best = i;
  }
  if (std::abs(v(best)) > 0.0) v *= std::abs(v(best)) / v(best);
}

}  // namespace

Matrix GnsRep::represent(const AlgebraElement& a) const {
  require_same_dim(a.dim(), static_cast<Index>(rep_matrices.size()), "GnsRep::represent");
  Matrix out = Matrix::Zero(rank, rank);
  for (Index i = 0; i < a.dim(); ++i) {
    if (a[i] != Complex{}) out += a[i] * rep_matrices[static_cast<size_t>(i)];
  }
  return out;
}

Matrix build_gram(const StarAlgebra& algebra, const State& omega) {
  Matrix g = algebra::gram_matrix(algebra, omega.functional());
  g = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -algebra::kPositivityTolerance) {
    throw NotPositive("build_gram: state is not positive, eigenvalue " + std::to_string(lowest), lowest);
  }
  return g;
}

Index numerical_rank(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<Index>((ev.array() > kRankThreshold * top).count());
}

GnsRep gns_construct(const StarAlgebra& algebra, const State& omega, Ordering ordering) {
  if (!algebra.has_unit()) throw MissingUnit("gns_construct: algebra has no unit");
  if (!omega.normalized()) throw std::invalid_argument("gns_construct: state is not normalized");

  GnsRep rep;
  rep.gram = build_gram(algebra, omega);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rep.gram);
  const RealVector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();

  std::vector<Index> kept;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > kRankThreshold * top) kept.push_back(i);
  }
  // Eigen returns ascending order
  if (ordering == Ordering::descending) std::reverse(kept.begin(), kept.end());

  const Index d = algebra.dim();
  rep.rank = static_cast<Index>(kept.size());
  rep.quotient_basis.resize(d, rep.rank);
  rep.coordinate_map.resize(rep.rank, d);
  for (Index r = 0; r < rep.rank; ++r) {
    Vector u = es.eigenvectors().col(kept[static_cast<size_t>(r)]);
    fix_phase(u);
    const double lambda = ev(kept[static_cast<size_t>(r)]);
    rep.quotient_basis.col(r) = u / std::sqrt(lambda);
    rep.coordinate_map.row(r) = std::sqrt(lambda) * u.adjoint();
  }

  rep.rep_matrices.reserve(static_cast<size_t>(d));
  for (Index i = 0; i < d; ++i) {
    rep.rep_matrices.push_back(rep.coordinate_map * algebra.left_multiplication(i) * rep.quotient_basis);
  }
  rep.cyclic_vector = rep.coordinate_map * algebra.unit().coeffs();
  return rep;
}

Diagnostics verify_gns(const StarAlgebra& algebra, const State& omega, const GnsRep& rep) {
  require_same_dim(static_cast<Index>(rep.rep_matrices.size()), algebra.dim(), "verify_gns");
  Diagnostics diag;
  const Index d = algebra.dim();
  const Matrix& s = algebra.involution_matrix();
  for (Index i = 0; i < d; ++i) {
    const Matrix& pi_i = rep.rep_matrices[static_cast<size_t>(i)];
    for (Index j = 0; j < d; ++j) {
      Matrix product = Matrix::Zero(rep.rank, rep.rank);
      for (Index k = 0; k < d; ++k) {
        const Complex c = algebra.structure_constant(i, j, k);
        if (c != Complex{}) product += c * rep.rep_matrices[static_cast<size_t>(k)];
      }
      diag.homomorphism_residual = std::max(
          diag.homomorphism_residual, max_abs(Matrix(pi_i * rep.rep_matrices[static_cast<size_t>(j)] - product)));
    }
    Matrix pi_star = Matrix::Zero(rep.rank, rep.rank);
    for (Index j = 0; j < d; ++j) {
      if (s(i, j) != Complex{}) pi_star += s(i, j) * rep.rep_matrices[static_cast<size_t>(j)];
    }
    diag.adjoint_residual = std::max(diag.adjoint_residual, max_abs(Matrix(pi_star - pi_i.adjoint())));

    const Complex reproduced = rep.cyclic_vector.dot(pi_i * rep.cyclic_vector);
    diag.state_residual = std::max(diag.state_residual, std::abs(reproduced - omega.functional()(i)));
  }

  // <lambda(x), lambda(y)> = y^H G x
  const Matrix coords = rep.coordinate_map;  // column i = lambda(e_i)
  const Matrix inner = coords.adjoint() * coords;
  diag.inner_product_residual = max_abs(Matrix(inner - rep.gram));

  if (rep.rank > 0 && rep.cyclic_vector.size() == rep.rank) {
    Matrix orbit(rep.rank, d);
    for (Index i = 0; i < d; ++i) orbit.col(i) = rep.rep_matrices[static_cast<size_t>(i)] * rep.cyclic_vector;
    Eigen::JacobiSVD<Matrix> svd(orbit);
    const RealVector& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    diag.cyclicity_rank = top == 0.0 ? 0 : static_cast<Index>((sv.array() > 1e-10 * top).count());
  }
  return diag;
}

nlohmann::json to_json(const GnsRep& rep) {
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& m : rep.rep_matrices) mats.push_back(io::matrix_to_json(m));
  return {{"rank", rep.rank},
          {"gram", io::matrix_to_json(rep.gram)},
          {"quotient_basis", io::matrix_to_json(rep.quotient_basis)},
          {"coordinate_map", io::matrix_to_json(rep.coordinate_map)},
          {"rep_matrices", std::move(mats)},
          {"cyclic_vector", io::vector_to_json(rep.cyclic_vector)}};
}

GnsRep gns_from_json(const nlohmann::json& j) {
  GnsRep rep;
  rep.rank = j.at("rank").get<Index>();
  rep.gram = io::matrix_from_json(j.at("gram"));
  rep.quotient_basis = io::matrix_from_json(j.at("quotient_basis"));
  rep.coordinate_map = io::matrix_from_json(j.at("coordinate_map"));
  for (const auto& m : j.at("rep_matrices")) rep.rep_matrices.push_back(io::matrix_from_json(m));
  rep.cyclic_vector = io::vector_from_json(j.at("cyclic_vector"));
  // matrix_from_json yields 0x0 for an empty quotient; keep shapes consistent
  if (rep.rank == 0) rep.quotient_basis.resize(rep.gram.rows(), 0);
  return rep;
}

nlohmann::json to_json(const Diagnostics& d) {
  return {{"homomorphism_residual", d.homomorphism_residual},
          {"adjoint_residual", d.adjoint_residual},
          {"cyclicity_rank", d.cyclicity_rank},
          {"state_residual", d.state_residual},
          {"inner_product_residual", d.inner_product_residual}};
}

}  // namespace quasistar::gns
