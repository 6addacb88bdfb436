#include "quasistar/algebra.hpp"

#include "quasistar/json_io.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace quasistar::algebra {

namespace {

constexpr double kStructureTolerance = 1e-10;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }
double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_dim(a.dim(), b.dim(), "AlgebraElement +");
  return AlgebraElement(a.coeffs_ + b.coeffs_);
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_dim(a.dim(), b.dim(), "AlgebraElement -");
  return AlgebraElement(a.coeffs_ - b.coeffs_);
}

StarAlgebra::StarAlgebra(std::vector<Matrix> left_multiplication, Matrix involution,
                         std::optional<Vector> unit)
    : left_(std::move(left_multiplication)), involution_(std::move(involution)),
      unit_(std::move(unit)) {
  const Index d = dim();
  if (d <= 0) throw std::invalid_argument("StarAlgebra: dim must be positive");
  for (const auto& l : left_) {
    if (l.rows() != d || l.cols() != d) {
      throw DimensionMismatch("StarAlgebra: structure slices must be dim x dim");
    }
  }
  if (involution_.rows() != d || involution_.cols() != d) {
    throw DimensionMismatch("StarAlgebra: involution matrix must be dim x dim");
  }
  if (unit_ && unit_->size() != d) throw DimensionMismatch("StarAlgebra: unit has wrong length");

  double scale = 1.0;
  for (const auto& l : left_) scale = std::max(scale, max_abs(l));
  const double tol = kStructureTolerance * scale * scale;
  if (double r = associativity_residual(); r > tol) {
    throw std::invalid_argument("StarAlgebra: structure constants not associative (residual " +
                                std::to_string(r) + ")");
  }
  if (double r = involution_residual(); r > tol) {
    throw std::invalid_argument("StarAlgebra: involution is not an antilinear anti-automorphism (residual " +
                                std::to_string(r) + ")");
  }
  if (double r = unit_residual(); r > tol) {
    throw std::invalid_argument("StarAlgebra: unit law fails (residual " + std::to_string(r) + ")");
  }
}

StarAlgebra StarAlgebra::from_structure_constants(
    const std::vector<std::vector<std::vector<Complex>>>& c, Matrix involution,
    std::optional<Vector> unit) {
  const auto d = static_cast<Index>(c.size());
  std::vector<Matrix> left(static_cast<size_t>(d), Matrix::Zero(d, d));
  for (Index i = 0; i < d; ++i) {
    const auto& ci = c[static_cast<size_t>(i)];
    if (static_cast<Index>(ci.size()) != d) throw DimensionMismatch("structure tensor is not dim^3");
    for (Index j = 0; j < d; ++j) {
      const auto& cij = ci[static_cast<size_t>(j)];
      if (static_cast<Index>(cij.size()) != d) throw DimensionMismatch("structure tensor is not dim^3");
      for (Index k = 0; k < d; ++k) left[static_cast<size_t>(i)](k, j) = cij[static_cast<size_t>(k)];
    }
  }
  return StarAlgebra(std::move(left), std::move(involution), std::move(unit));
}

void StarAlgebra::check(const AlgebraElement& a, const char* where) const {
  require_same_dim(a.dim(), dim(), where);
}

AlgebraElement StarAlgebra::unit() const {
  if (!unit_) throw MissingUnit("algebra has no unit");
  return AlgebraElement(*unit_);
}

AlgebraElement StarAlgebra::basis(Index i) const {
  if (i < 0 || i >= dim()) throw std::out_of_range("basis index out of range");
  Vector v = Vector::Zero(dim());
  v(i) = 1.0;
  return AlgebraElement(std::move(v));
}

AlgebraElement StarAlgebra::element(Vector coeffs) const {
  require_same_dim(coeffs.size(), dim(), "StarAlgebra::element");
  return AlgebraElement(std::move(coeffs));
}

Matrix StarAlgebra::left_matrix(const AlgebraElement& a) const {
  check(a, "left_matrix");
  Matrix l = Matrix::Zero(dim(), dim());
  for (Index i = 0; i < dim(); ++i) {
    if (a[i] != Complex{}) l += a[i] * left_[static_cast<size_t>(i)];
  }
  return l;
}

AlgebraElement StarAlgebra::multiply(const AlgebraElement& a, const AlgebraElement& b) const {
  check(a, "multiply");
  check(b, "multiply");
  return AlgebraElement(left_matrix(a) * b.coeffs());
}

AlgebraElement StarAlgebra::star(const AlgebraElement& a) const {
  check(a, "star");
  // (sum_i a_i e_i)* = sum_i conj(a_i) sum_j S_ij e_j
  return AlgebraElement(involution_.transpose() * a.coeffs().conjugate());
}

double StarAlgebra::associativity_residual() const {
  // (e_i e_j) e_k - e_i (e_j e_k), both as vectors
  double worst = 0.0;
  const Index d = dim();
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const Vector eij = left_[static_cast<size_t>(i)].col(j);
      const Matrix lhs = left_matrix(AlgebraElement(eij));
      const Matrix rhs = left_[static_cast<size_t>(i)] * left_[static_cast<size_t>(j)];
      worst = std::max(worst, max_abs(Matrix(lhs - rhs)));
    }
  }
  return worst;
}

double StarAlgebra::involution_residual() const {
  const Index d = dim();
  double worst = max_abs(Matrix(involution_ * involution_.conjugate() - Matrix::Identity(d, d)));
  for (Index i = 0; i < d; ++i) {
    const AlgebraElement ei_star = star(basis(i));
    for (Index j = 0; j < d; ++j) {
      const AlgebraElement lhs = star(multiply(basis(i), basis(j)));
      const AlgebraElement rhs = multiply(star(basis(j)), ei_star);
      worst = std::max(worst, max_abs(Vector(lhs.coeffs() - rhs.coeffs())));
    }
  }
  return worst;
}

double StarAlgebra::unit_residual() const {
  if (!unit_) return 0.0;
  const Matrix lu = left_matrix(AlgebraElement(*unit_));
  double worst = max_abs(Matrix(lu - Matrix::Identity(dim(), dim())));
  for (Index i = 0; i < dim(); ++i) {
    const Vector right = left_[static_cast<size_t>(i)] * *unit_;
    Vector ei = Vector::Zero(dim());
    ei(i) = 1.0;
    worst = std::max(worst, max_abs(Vector(right - ei)));
  }
  return worst;
}

Matrix gram_matrix(const StarAlgebra& algebra, const Vector& functional) {
  require_same_dim(functional.size(), algebra.dim(), "gram_matrix");
  const Index d = algebra.dim();
  Matrix g(d, d);
  for (Index i = 0; i < d; ++i) {
    const AlgebraElement ei_star = algebra.star(algebra.basis(i));
    const Matrix l = algebra.left_matrix(ei_star);
    // omega(e_i* e_j) = sum_k (L_{e_i*})_{kj} omega_k
    g.row(i) = functional.transpose() * l;
  }
  return g;
}

State::State(const StarAlgebra& algebra, Vector functional) : functional_(std::move(functional)) {
  require_same_dim(functional_.size(), algebra.dim(), "State");
  double herm = 0.0;
  double scale = std::max(1.0, max_abs(functional_));
  for (Index i = 0; i < algebra.dim(); ++i) {
    // omega(e_i*) = sum_j S_ij omega_j
    const Complex value = (algebra.involution_matrix().row(i).transpose().array() * functional_.array()).sum();
    herm = std::max(herm, std::abs(value - std::conj(functional_(i))));
  }
  if (herm > 1e-10 * scale) {
    throw std::invalid_argument("State: functional is not hermitian (residual " + std::to_string(herm) + ")");
  }
  const Matrix g = gram_matrix(algebra, functional_);
  const Matrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double lowest = es.eigenvalues().minCoeff();
  if (lowest < -kPositivityTolerance) {
    throw NotPositive("State: Gram matrix has negative eigenvalue " + std::to_string(lowest), lowest);
  }
  if (algebra.has_unit()) {
    normalized_ = std::abs((*this)(algebra.unit()) - 1.0) < 1e-12;
  }
}

Complex State::operator()(const AlgebraElement& a) const {
  require_same_dim(a.dim(), dim(), "State evaluation");
  return (functional_.array() * a.coeffs().array()).sum();
}

Complex evaluate_state(const State& omega, const AlgebraElement& a) { return omega(a); }

StarAlgebra matrix_algebra(int n) {
  if (n <= 0) throw std::invalid_argument("matrix_algebra: n must be positive");
  const Index d = static_cast<Index>(n) * n;
  std::vector<Matrix> left(static_cast<size_t>(d), Matrix::Zero(d, d));
  Matrix s = Matrix::Zero(d, d);
  Vector unit = Vector::Zero(d);
  for (int i = 0; i < n; ++i) {
    unit(matrix_unit(n, i, i)) = 1.0;
    for (int j = 0; j < n; ++j) {
      s(matrix_unit(n, i, j), matrix_unit(n, j, i)) = 1.0;
      // E_ij E_jl = E_il
      for (int l = 0; l < n; ++l) {
        left[static_cast<size_t>(matrix_unit(n, i, j))](matrix_unit(n, i, l), matrix_unit(n, j, l)) = 1.0;
      }
    }
  }
  return StarAlgebra(std::move(left), std::move(s), std::move(unit));
}

StarAlgebra complex_numbers() {
  return StarAlgebra({Matrix::Identity(1, 1)}, Matrix::Identity(1, 1), Vector::Ones(1));
}

StarAlgebra cyclic_group_algebra(int k) {
  if (k <= 0) throw std::invalid_argument("cyclic_group_algebra: k must be positive");
  std::vector<Matrix> left(static_cast<size_t>(k), Matrix::Zero(k, k));
  Matrix s = Matrix::Zero(k, k);
  for (int g = 0; g < k; ++g) {
    s(g, (k - g) % k) = 1.0;
    for (int h = 0; h < k; ++h) left[static_cast<size_t>(g)]((g + h) % k, h) = 1.0;
  }
  Vector unit = Vector::Zero(k);
  unit(0) = 1.0;
  return StarAlgebra(std::move(left), std::move(s), std::move(unit));
}

AlgebraElement from_matrix(const StarAlgebra& mn, const Matrix& m) {
  const auto n = static_cast<int>(m.rows());
  require_same_dim(static_cast<Index>(n) * n, mn.dim(), "from_matrix");
  Vector v(mn.dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v(matrix_unit(n, i, j)) = m(i, j);
  return AlgebraElement(std::move(v));
}

Matrix to_matrix(const AlgebraElement& a, int n) {
  require_same_dim(a.dim(), static_cast<Index>(n) * n, "to_matrix");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a[matrix_unit(n, i, j)];
  return m;
}

State density_state(const StarAlgebra& mn, const Matrix& rho) {
  const auto n = static_cast<int>(rho.rows());
  require_same_dim(static_cast<Index>(n) * n, mn.dim(), "density_state");
  Vector w(mn.dim());
  // tr(rho E_ij) = rho_ji
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(matrix_unit(n, i, j)) = rho(j, i);
  return State(mn, std::move(w));
}

State normalized_trace(const StarAlgebra& mn, int n) {
  return density_state(mn, Matrix::Identity(n, n) / static_cast<double>(n));
}

State first_entry_state(const StarAlgebra& mn, int n) {
  Matrix rho = Matrix::Zero(n, n);
  rho(0, 0) = 1.0;
  return density_state(mn, rho);
}

State group_trace(const StarAlgebra& zk) {
  Vector w = Vector::Zero(zk.dim());
  w(0) = 1.0;
  return State(zk, std::move(w));
}

nlohmann::json to_json(const StarAlgebra& algebra) {
  using nlohmann::json;
  const Index d = algebra.dim();
  json structure = json::array();
  for (Index i = 0; i < d; ++i) {
    json plane = json::array();
    for (Index j = 0; j < d; ++j) {
      json line = json::array();
      for (Index k = 0; k < d; ++k) line.push_back(io::complex_to_json(algebra.structure_constant(i, j, k)));
      plane.push_back(std::move(line));
    }
    structure.push_back(std::move(plane));
  }
  json out{{"dim", d}, {"structure", std::move(structure)},
           {"involution", io::matrix_to_json(algebra.involution_matrix())}};
  out["unit"] = algebra.has_unit() ? io::vector_to_json(algebra.unit().coeffs()) : json(nullptr);
  return out;
}

StarAlgebra algebra_from_json(const nlohmann::json& j) {
  const auto d = j.at("dim").get<Index>();
  const auto& s = j.at("structure");
  if (static_cast<Index>(s.size()) != d) throw DimensionMismatch("algebra json: structure size != dim");
  std::vector<std::vector<std::vector<Complex>>> c(static_cast<size_t>(d));
  for (Index i = 0; i < d; ++i) {
    const auto& plane = s.at(static_cast<size_t>(i));
    for (const auto& line : plane) {
      std::vector<Complex> row;
      for (const auto& z : line) row.push_back(io::complex_from_json(z));
      c[static_cast<size_t>(i)].push_back(std::move(row));
    }
  }
  std::optional<Vector> unit;
  if (j.contains("unit") && !j.at("unit").is_null()) unit = io::vector_from_json(j.at("unit"));
  return StarAlgebra::from_structure_constants(c, io::matrix_from_json(j.at("involution")), std::move(unit));
}

nlohmann::json to_json(const State& state) {
  return {{"dim", state.dim()}, {"functional", io::vector_to_json(state.functional())}};
}

State state_from_json(const StarAlgebra& algebra, const nlohmann::json& j) {
  Vector w = io::vector_from_json(j.at("functional"));
  if (j.contains("dim")) require_same_dim(j.at("dim").get<Index>(), w.size(), "state json");
  return State(algebra, std::move(w));
}

}  // namespace quasistar::algebra
