#include "quasistar/topology.hpp"

#include "quasistar/sequence.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace quasistar::topology {

Topology parse_topology(std::string_view tag) {
  if (tag == "uniform") return Topology::uniform;
  if (tag == "strong") return Topology::strong;
  if (tag == "strongstar") return Topology::strongstar;
  if (tag == "weak") return Topology::weak;
  throw std::invalid_argument("unknown topology tag '" + std::string(tag) +
                              "' (expected uniform | strong | strongstar | weak)");
}

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::uniform: return "uniform";
    case Topology::strong: return "strong";
    case Topology::strongstar: return "strongstar";
    case Topology::weak: return "weak";
  }
  return "?";
}

std::string_view to_string(Membership m) {
  switch (m) {
    case Membership::none: return "none";
    case Membership::extended: return "A(pi,tau_op)";
    case Membership::completion_only: return "A~(pi,tau_op)";
  }
  return "?";
}

// --- TruncatedTriple ----------------------------------------------------------

TruncatedTriple::TruncatedTriple(RealVector metric, RealVector graph_weights)
    : metric_(std::move(metric)), graph_weights_(std::move(graph_weights)) {
  require_same_dim(metric_.size(), graph_weights_.size(), "TruncatedTriple");
  if (metric_.size() == 0) throw std::invalid_argument("TruncatedTriple: empty truncation");
  if ((metric_.array() <= 0.0).any()) throw std::invalid_argument("TruncatedTriple: inner product not positive definite");
  if ((graph_weights_.array() < 1.0).any()) throw std::invalid_argument("TruncatedTriple: graph weights must be >= 1");
}

TruncatedTriple TruncatedTriple::euclidean(Index dim) {
  return TruncatedTriple(RealVector::Ones(dim), RealVector::Ones(dim));
}

Complex TruncatedTriple::inner(const Vector& u, const Vector& v) const {
  require_same_dim(u.size(), dim(), "inner");
  require_same_dim(v.size(), dim(), "inner");
  return (v.conjugate().array() * metric_.array().cast<Complex>() * u.array()).sum();
}

double TruncatedTriple::norm(const Vector& v) const {
  require_same_dim(v.size(), dim(), "norm");
  return std::sqrt((metric_.array() * v.array().abs2()).sum());
}

double TruncatedTriple::graph_seminorm(const Vector& v, int k) const {
  if (k < 0) throw std::invalid_argument("graph_seminorm: k must be >= 0");
  const RealVector w = graph_weights_.array().pow(k);
  return norm(Vector(w.cast<Complex>().cwiseProduct(v)));
}

double TruncatedTriple::dual_seminorm(const Vector& v, int k) const {
  if (k < 0) throw std::invalid_argument("dual_seminorm: k must be >= 0");
  const RealVector w = graph_weights_.array().pow(-k);
  return norm(Vector(w.cast<Complex>().cwiseProduct(v)));
}

// --- TruncatedOperator --------------------------------------------------------

TruncatedOperator::TruncatedOperator(RealVector metric, std::optional<Matrix> dense, std::optional<Vector> diagonal)
    : metric_(std::move(metric)), dense_(std::move(dense)), diagonal_(std::move(diagonal)) {
  if (dense_) {
    // A^dagger = G^{-1} A^H G for diagonal G
    Matrix adj = dense_->adjoint();
    for (Index i = 0; i < adj.rows(); ++i) adj.row(i) /= metric_(i);
    for (Index j = 0; j < adj.cols(); ++j) adj.col(j) *= metric_(j);
    dense_adjoint_ = std::move(adj);
  }
}

TruncatedOperator::TruncatedOperator(const TruncatedTriple& triple, Matrix matrix)
    : TruncatedOperator(triple.metric(), std::nullopt, std::nullopt) {
  if (matrix.rows() != triple.dim() || matrix.cols() != triple.dim()) {
    throw DimensionMismatch("TruncatedOperator: matrix does not match truncation dim");
  }
  *this = TruncatedOperator(triple.metric(), std::move(matrix), std::nullopt);
}

TruncatedOperator TruncatedOperator::diagonal(const TruncatedTriple& triple, Vector diag) {
  require_same_dim(diag.size(), triple.dim(), "TruncatedOperator::diagonal");
  return TruncatedOperator(triple.metric(), std::nullopt, std::move(diag));
}

TruncatedOperator TruncatedOperator::zero(const TruncatedTriple& triple) {
  return diagonal(triple, Vector::Zero(triple.dim()));
}

TruncatedOperator TruncatedOperator::identity(const TruncatedTriple& triple) {
  return diagonal(triple, Vector::Ones(triple.dim()));
}

Vector TruncatedOperator::apply(const Vector& v) const {
  require_same_dim(v.size(), dim(), "TruncatedOperator::apply");
  if (diagonal_) return diagonal_->cwiseProduct(v);
  return *dense_ * v;
}

Vector TruncatedOperator::apply_adjoint(const Vector& v) const {
  require_same_dim(v.size(), dim(), "TruncatedOperator::apply_adjoint");
  if (diagonal_) return diagonal_->conjugate().cwiseProduct(v);
  return *dense_adjoint_ * v;
}

Matrix TruncatedOperator::apply(const Matrix& m) const {
  require_same_dim(m.rows(), dim(), "TruncatedOperator::apply");
  if (diagonal_) return diagonal_->asDiagonal() * m;
  return *dense_ * m;
}

Matrix TruncatedOperator::apply_adjoint(const Matrix& m) const {
  require_same_dim(m.rows(), dim(), "TruncatedOperator::apply_adjoint");
  if (diagonal_) return diagonal_->conjugate().asDiagonal() * m;
  return *dense_adjoint_ * m;
}

TruncatedOperator TruncatedOperator::adjoint() const {
  if (diagonal_) return TruncatedOperator(metric_, std::nullopt, Vector(diagonal_->conjugate()));
  return TruncatedOperator(metric_, *dense_adjoint_, std::nullopt);
}

Matrix TruncatedOperator::dense() const {
  if (diagonal_) return diagonal_->asDiagonal();
  return *dense_;
}

Matrix TruncatedOperator::dense_adjoint() const {
  if (diagonal_) return diagonal_->conjugate().asDiagonal();
  return *dense_adjoint_;
}

double TruncatedOperator::adjoint_residual() const {
  // <A e_j, e_i> = G_ii A_ij ; <e_j, A^dagger e_i> = conj(G_jj Adag_ji)
  const Matrix a = dense();
  const Matrix adag = dense_adjoint();
  double worst = 0.0;
  for (Index i = 0; i < dim(); ++i) {
    for (Index j = 0; j < dim(); ++j) {
      const Complex lhs = metric_(i) * a(i, j);
      const Complex rhs = std::conj(metric_(j) * adag(j, i));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

void TruncatedOperator::require_compatible(const TruncatedOperator& a, const TruncatedOperator& b) {
  require_same_dim(a.dim(), b.dim(), "TruncatedOperator arithmetic");
  if (a.metric_ != b.metric_) throw DimensionMismatch("TruncatedOperator arithmetic: different inner products");
}

TruncatedOperator operator+(const TruncatedOperator& a, const TruncatedOperator& b) {
  TruncatedOperator::require_compatible(a, b);
  if (a.diagonal_ && b.diagonal_) return TruncatedOperator(a.metric_, std::nullopt, Vector(*a.diagonal_ + *b.diagonal_));
  return TruncatedOperator(a.metric_, Matrix(a.dense() + b.dense()), std::nullopt);
}

TruncatedOperator operator-(const TruncatedOperator& a, const TruncatedOperator& b) {
  TruncatedOperator::require_compatible(a, b);
  if (a.diagonal_ && b.diagonal_) return TruncatedOperator(a.metric_, std::nullopt, Vector(*a.diagonal_ - *b.diagonal_));
  return TruncatedOperator(a.metric_, Matrix(a.dense() - b.dense()), std::nullopt);
}

TruncatedOperator operator*(Complex s, const TruncatedOperator& a) {
  if (a.diagonal_) return TruncatedOperator(a.metric_, std::nullopt, Vector(s * *a.diagonal_));
  return TruncatedOperator(a.metric_, Matrix(s * *a.dense_), std::nullopt);
}

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
  TruncatedOperator::require_compatible(a, b);
  if (a.diagonal_ && b.diagonal_) {
    return TruncatedOperator(a.metric_, std::nullopt, Vector(a.diagonal_->cwiseProduct(*b.diagonal_)));
  }
  return TruncatedOperator(a.metric_, Matrix(a.dense() * b.dense()), std::nullopt);
}

double operator_norm(const TruncatedOperator& a) {
  if (a.is_diagonal()) return a.dense().diagonal().cwiseAbs().maxCoeff();
  // ||A|| = ||G^{1/2} A G^{-1/2}||_2
  const RealVector s = a.metric().cwiseSqrt();
  Matrix m = a.dense();
  for (Index i = 0; i < m.rows(); ++i) m.row(i) *= s(i);
  for (Index j = 0; j < m.cols(); ++j) m.col(j) /= s(j);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// --- bounded sets -------------------------------------------------------------

BoundedSet sample_graph_ball(const TruncatedTriple& triple, int k, int count, std::uint64_t seed, std::string name) {
  if (count <= 0) throw std::invalid_argument("sample_graph_ball: count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  BoundedSet set;
  set.name = name.empty() ? "graph_ball_k" + std::to_string(k) : std::move(name);
  set.vectors.resize(triple.dim(), count);
  for (int c = 0; c < count; ++c) {
    Vector v(triple.dim());
    for (Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
    v /= triple.graph_seminorm(v, k);
    set.vectors.col(c) = v;
  }
  return set;
}

std::vector<BoundedSet> default_suite(const TruncatedTriple& triple, std::uint64_t seed) {
  std::vector<BoundedSet> suite;
  for (int k = 0; k <= 2; ++k) suite.push_back(sample_graph_ball(triple, k, 8, seed + static_cast<std::uint64_t>(k)));
  return suite;
}

Matrix pairing_matrix(const TruncatedOperator& a, const TruncatedTriple& triple, const Matrix& cols, const Matrix& rows) {
  require_same_dim(a.dim(), triple.dim(), "pairing_matrix");
  const Matrix image = a.apply(cols);
  return rows.adjoint() * (triple.metric().cast<Complex>().asDiagonal() * image);
}

double seminorm(const TruncatedOperator& a, const TruncatedTriple& triple, Topology topology, const BoundedSet& m,
                const std::optional<Vector>& phi, const std::optional<Vector>& psi) {
  auto need_m = [&] {
    if (m.size() == 0) throw std::invalid_argument("seminorm: bounded set is empty");
  };
  switch (topology) {
    case Topology::uniform: {
      need_m();
      return pairing_matrix(a, triple, m.vectors, m.vectors).cwiseAbs().maxCoeff();
    }
    case Topology::strong: {
      need_m();
      if (!phi) throw std::invalid_argument("seminorm: strong topology needs phi");
      return pairing_matrix(a, triple, *phi, m.vectors).cwiseAbs().maxCoeff();
    }
    case Topology::strongstar: {
      need_m();
      if (!phi) throw std::invalid_argument("seminorm: strong* topology needs phi");
      const double s = pairing_matrix(a, triple, *phi, m.vectors).cwiseAbs().maxCoeff();
      const double t = pairing_matrix(a.adjoint(), triple, *phi, m.vectors).cwiseAbs().maxCoeff();
      return std::max(s, t);
    }
    case Topology::weak: {
      if (!phi || !psi) throw std::invalid_argument("seminorm: weak topology needs phi and psi");
      return std::abs(triple.inner(a.apply(*phi), *psi));
    }
  }
  return 0.0;
}

double strongstar_hilbert_seminorm(const TruncatedOperator& a, const TruncatedTriple& triple, const Vector& f) {
  return std::max(triple.norm(a.apply(f)), triple.norm(a.apply_adjoint(f)));
}

SeminormFamily make_family(const TruncatedTriple& triple, Topology topology, std::vector<BoundedSet> suite,
                           Matrix probes) {
  for (const auto& m : suite) require_same_dim(m.vectors.rows(), triple.dim(), "make_family");
  if (probes.size() != 0) require_same_dim(probes.rows(), triple.dim(), "make_family");
  if (topology == Topology::weak && probes.cols() == 0) {
    Index total = 0;
    for (const auto& m : suite) total += m.size();
    probes.resize(triple.dim(), total);
    Index c = 0;
    for (const auto& m : suite) {
      probes.middleCols(c, m.size()) = m.vectors;
      c += m.size();
    }
  }
  if (topology != Topology::weak && suite.empty()) throw std::invalid_argument("make_family: empty bounded-set suite");
  if ((topology == Topology::strong || topology == Topology::strongstar) && probes.cols() == 0) {
    throw std::invalid_argument("make_family: strong topologies need probe vectors");
  }

  SeminormFamily fam;
  fam.topology = topology;
  fam.name = std::string(to_string(topology));
  const Index np = probes.cols();
  switch (topology) {
    case Topology::uniform:
      for (const auto& m : suite) fam.labels.push_back("uniform[" + m.name + "]");
      break;
    case Topology::strong:
    case Topology::strongstar:
      for (const auto& m : suite)
        for (Index j = 0; j < np; ++j) fam.labels.push_back(fam.name + "[" + m.name + ",phi" + std::to_string(j) + "]");
      for (Index j = 0; j < np; ++j) fam.labels.push_back(fam.name + "[H,phi" + std::to_string(j) + "]");
      break;
    case Topology::weak:
      for (Index i = 0; i < np; ++i)
        for (Index j = 0; j < np; ++j) fam.labels.push_back("weak[phi" + std::to_string(j) + ",psi" + std::to_string(i) + "]");
      break;
  }

  fam.evaluate = [triple, topology, suite = std::move(suite), probes = std::move(probes)](const TruncatedOperator& a) {
    std::vector<double> out;
    switch (topology) {
      case Topology::uniform:
        for (const auto& m : suite) out.push_back(pairing_matrix(a, triple, m.vectors, m.vectors).cwiseAbs().maxCoeff());
        break;
      case Topology::strong:
      case Topology::strongstar: {
        const Matrix image = triple.metric().cast<Complex>().asDiagonal() * a.apply(probes);
        Matrix image_adj;
        if (topology == Topology::strongstar) image_adj = triple.metric().cast<Complex>().asDiagonal() * a.apply_adjoint(probes);
        for (const auto& m : suite) {
          const RealMatrix c = (m.vectors.adjoint() * image).cwiseAbs();
          RealVector col_max = c.colwise().maxCoeff().transpose();
          if (topology == Topology::strongstar) {
            const RealMatrix cd = (m.vectors.adjoint() * image_adj).cwiseAbs();
            col_max = col_max.cwiseMax(RealVector(cd.colwise().maxCoeff().transpose()));
          }
          for (Index j = 0; j < col_max.size(); ++j) out.push_back(col_max(j));
        }
        for (Index j = 0; j < probes.cols(); ++j) {
          double h = triple.norm(a.apply(Vector(probes.col(j))));
          if (topology == Topology::strongstar) h = std::max(h, triple.norm(a.apply_adjoint(Vector(probes.col(j)))));
          out.push_back(h);
        }
        break;
      }
      case Topology::weak: {
        const RealMatrix c = pairing_matrix(a, triple, probes, probes).cwiseAbs();
        for (Index i = 0; i < c.rows(); ++i)
          for (Index j = 0; j < c.cols(); ++j) out.push_back(c(i, j));
        break;
      }
    }
    return out;
  };
  return fam;
}

// --- extension by closure -----------------------------------------------------

namespace {

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

struct CauchyScan {
  std::vector<std::vector<double>> residuals;
  std::vector<double> sizes;
  double scale = 0.0;
  bool cauchy = false;
};

CauchyScan scan(const std::vector<TruncatedOperator>& reps, const SeminormFamily& family, const ExtensionOptions& opt) {
  CauchyScan s;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    s.sizes.push_back(max_of(family.evaluate(reps[i])));
    if (i > 0) s.residuals.push_back(family.evaluate(reps[i] - reps[i - 1]));
  }
  s.scale = max_of(s.sizes);
  if (s.residuals.size() >= opt.window) {
    s.cauchy = true;
    for (std::size_t i = s.residuals.size() - opt.window; i < s.residuals.size(); ++i) {
      if (max_of(s.residuals[i]) > opt.cauchy_tolerance * s.scale) s.cauchy = false;
    }
  }
  return s;
}

bool ambient_tends_to_zero(const std::vector<double>& d) {
  if (d.empty()) return false;
  const double first = std::max(std::abs(d.front()), 1e-300);
  if (sequence::tail_negligible(d, first)) return true;
  std::vector<double> steps(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) steps[i] = static_cast<double>(i + 1);
  return sequence::tends_to_zero(steps, d);
}

}  // namespace

ExtensionResult extend_by_closure(const std::vector<double>& ambient_distances,
                                  const std::vector<TruncatedOperator>& reps, const SeminormFamily& family,
                                  const std::function<double(const TruncatedOperator&)>& bounded_size,
                                  const ExtensionOptions& options) {
  if (reps.empty()) throw std::invalid_argument("extend_by_closure: empty sequence");
  for (const auto& r : reps) require_same_dim(r.dim(), reps.front().dim(), "extend_by_closure");
  if (!ambient_distances.empty()) require_same_dim(static_cast<Index>(ambient_distances.size()),
                                                   static_cast<Index>(reps.size()), "extend_by_closure ambient");

  ExtensionResult result;
  result.topology = family.topology;
  result.labels = family.labels;
  const CauchyScan s = scan(reps, family, options);
  result.residual_trace = s.residuals;
  result.size_trace = s.sizes;
  result.scale = s.scale;
  result.converged = s.cauchy;
  result.ambient_converged = ambient_tends_to_zero(ambient_distances);
  if (result.converged) result.limit = reps.back();

  if (result.converged && result.ambient_converged) {
    const auto size = bounded_size ? bounded_size : [](const TruncatedOperator& a) { return operator_norm(a); };
    const double first = size(reps.front());
    const double last = size(reps.back());
    result.membership = last > options.growth_factor * std::max(first, 1e-300) ? Membership::completion_only
                                                                              : Membership::extended;
  }
  return result;
}

nlohmann::json to_json(const ExtensionResult& r) {
  nlohmann::json final_residuals = nlohmann::json::array();
  if (!r.residual_trace.empty()) final_residuals = r.residual_trace.back();
  return {{"converged", r.converged},
          {"topology", std::string(to_string(r.topology))},
          {"membership", std::string(to_string(r.membership))},
          {"ambient_converged", r.ambient_converged},
          {"scale", r.scale},
          {"steps", r.size_trace.size()},
          {"has_limit", r.limit.has_value()},
          {"final_max_residual", r.residual_trace.empty() ? 0.0 : max_of(r.residual_trace.back())}};
}

std::string trace_csv(const ExtensionResult& r) {
  std::ostringstream out;
  out << std::setprecision(12) << "step";
  for (const auto& l : r.labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < r.residual_trace.size(); ++i) {
    out << (i + 1);
    for (double v : r.residual_trace[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

ClosabilityVerdict closability_check(const std::vector<NullFamily>& families, const SeminormFamily& family,
                                     const ExtensionOptions& options) {
  ClosabilityVerdict verdict;
  for (const auto& f : families) {
    if (f.reps.empty()) throw std::invalid_argument("closability_check: empty family " + f.name);
    FamilyClosability row;
    row.family = f.name;
    row.tau_null = ambient_tends_to_zero(f.ambient_norms);
    const CauchyScan s = scan(f.reps, family, options);
    row.reps_cauchy = s.cauchy;
    row.limit_seminorm = max_of(family.evaluate(f.reps.back()));
    row.counterexample = row.tau_null && row.reps_cauchy && row.limit_seminorm >= kLimitZeroThreshold;
    verdict.families.push_back(row);
  }
  return verdict;
}

nlohmann::json to_json(const ClosabilityVerdict& v) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& f : v.families) {
    rows.push_back({{"family", f.family},
                    {"tau_null", f.tau_null},
                    {"reps_cauchy", f.reps_cauchy},
                    {"limit_seminorm", f.limit_seminorm},
                    {"counterexample", f.counterexample}});
  }
  return {{"counterexample_found", v.counterexample_found()}, {"families", std::move(rows)}};
}

ClosureReport quasi_algebra_closure_test(const std::vector<ClosureSample>& samples,
                                         const std::vector<std::pair<std::string, TruncatedOperator>>& ao_elements,
                                         const SeminormFamily& family, const ExtensionOptions& options) {
  ClosureReport report;
  report.bounded_branch = true;
  for (const auto& [name, b] : ao_elements) report.bounded_branch = report.bounded_branch && std::isfinite(operator_norm(b));
  report.involution_skipped = family.topology == Topology::strong;
  for (const auto& sample : samples) {
    for (const auto& [name, b] : ao_elements) {
      ClosureRow row;
      row.sample = sample.name;
      row.element = name;
      std::vector<TruncatedOperator> right;
      right.reserve(sample.reps.size());
      for (const auto& x : sample.reps) right.push_back(x * b);
      row.right_product_cauchy = scan(right, family, options).cauchy;
      if (!report.involution_skipped) {
        std::vector<TruncatedOperator> adj;
        for (const auto& x : right) adj.push_back(x.adjoint());
        row.involution_cauchy = scan(adj, family, options).cauchy;
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

nlohmann::json to_json(const ClosureReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"sample", row.sample},
                    {"element", row.element},
                    {"right_product_cauchy", row.right_product_cauchy},
                    {"involution_cauchy", row.involution_cauchy ? nlohmann::json(*row.involution_cauchy)
                                                                : nlohmann::json("skipped")}});
  }
  return {{"bounded_branch", r.bounded_branch},
          {"involution_skipped", r.involution_skipped},
          {"all_stable", r.all_stable()},
          {"rows", std::move(rows)}};
}

}  // namespace quasistar::topology
