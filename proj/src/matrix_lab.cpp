#include "quasistar/matrix_lab.hpp"

#include "quasistar/sequence.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

namespace quasistar::matrix_lab {

namespace {

Matrix unit_matrix(Index n, Index i, Index j) {
  Matrix a = Matrix::Zero(n, n);
  if (i < n && j < n) a(i, j) = 1.0;
  return a;
}

}  // namespace

double weighted_norm(const Matrix& a) {
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const double mn = static_cast<double>((i + 1) * (j + 1));
      s += std::norm(a(i, j)) / (mn * mn);
    }
  }
  return std::sqrt(s);
}

double hs_norm(const Matrix& a) { return a.norm(); }

Complex trace_form(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("trace_form: truncation sizes differ");
  return (b.conjugate().array() * a.array()).sum();
}

void unit() { throw MissingUnit("weighted matrix algebra: quasi *-algebra without unit"); }

Matrix truncate(const EntryRule& rule, Index n) {
  if (n < 2) throw std::invalid_argument("truncate: N must be >= 2");
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = rule(i + 1, j + 1);
  return a;
}

forms::FormContext<Matrix> trace_form_context() {
  forms::FormContext<Matrix> ctx;
  ctx.name = "trace_form";
  ctx.ambient_norm = [](const Matrix& a) { return weighted_norm(a); };
  ctx.form = [](const Matrix& a, const Matrix& b) { return trace_form(a, b); };
  ctx.subtract = [](const Matrix& a, const Matrix& b) -> Matrix { return a - b; };
  ctx.involution = [](const Matrix& a) -> Matrix { return a.adjoint(); };
  ctx.multiply = [](const Matrix& a, const Matrix& b) -> Matrix { return a * b; };
  return ctx;
}

std::vector<MatrixFamily> null_families() {
  std::vector<MatrixFamily> f;
  f.push_back({"E11/k", [](double k, Index n) -> Matrix { return unit_matrix(n, 0, 0) / k; }});
  f.push_back({"(E12+E21)/k",
               [](double k, Index n) -> Matrix { return (unit_matrix(n, 0, 1) + unit_matrix(n, 1, 0)) / k; }});
  f.push_back({"block4/k", [](double k, Index n) -> Matrix {
                 Matrix a = Matrix::Zero(n, n);
                 a.topLeftCorner(std::min<Index>(4, n), std::min<Index>(4, n)).setConstant(1.0 / k);
                 return a;
               }});
  f.push_back({"E33/k^2", [](double k, Index n) -> Matrix { return unit_matrix(n, 2, 2) / (k * k); }});
  f.push_back({"harmonic_block/k", [](double k, Index n) -> Matrix {
                 return truncate(
                     [k](Index m, Index j) -> Complex {
                       return (static_cast<double>(m) <= k && static_cast<double>(j) <= k)
                                  ? 1.0 / (k * static_cast<double>(m * j))
                                  : 0.0;
                     },
                     n);
               }});
  return f;
}

std::vector<MatrixFamily> control_families() {
  std::vector<MatrixFamily> f;
  f.push_back({"Ekk", [](double k, Index n) -> Matrix {
                 const auto i = static_cast<Index>(k) - 1;
                 return unit_matrix(n, i, i);
               },
               false});
  f.push_back({"block_k/k", [](double k, Index n) -> Matrix {
                 const Index b = std::min(n, static_cast<Index>(k));
                 Matrix a = Matrix::Zero(n, n);
                 a.topLeftCorner(b, b).setConstant(1.0 / k);
                 return a;
               },
               false});
  return f;
}

std::vector<double> doubling_indices(Index n) {
  std::vector<double> k;
  for (Index v = 1; v <= n; v *= 2) k.push_back(static_cast<double>(v));
  return k;
}

ReplayVerdict matrix_closability_replay(const MatrixFamily& family, Index n) {
  if (n < 2) throw std::invalid_argument("matrix_closability_replay: N must be >= 2");
  const auto ctx = trace_form_context();
  forms::ProbeFamily<Matrix> probe{family.name, doubling_indices(n),
                                   [&family, n](double k) { return family.member(k, n); }};
  ReplayVerdict v;
  v.family = family.name;
  v.n = n;
  v.probe = forms::closability_probe(ctx, probe);
  v.weighted_null = v.probe.tau_null;
  v.hs_cauchy = v.probe.omega_cauchy;
  v.a = v.probe.omega_limit;
  v.entry_residual = family.member(probe.indices.back(), n).cwiseAbs2().maxCoeff();
  v.counterexample = v.probe.counterexample();
  return v;
}

std::vector<ReplayVerdict> replay_levels(const MatrixFamily& family, const std::vector<Index>& levels) {
  std::vector<std::future<ReplayVerdict>> jobs;
  for (Index n : levels) {
    jobs.push_back(std::async(std::launch::async, [&family, n] { return matrix_closability_replay(family, n); }));
  }
  std::vector<ReplayVerdict> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

nlohmann::json to_json(const ReplayVerdict& v) {
  return {{"family", v.family},
          {"N", v.n},
          {"weighted_null", v.weighted_null},
          {"hs_cauchy", v.hs_cauchy},
          {"a", v.a ? nlohmann::json(*v.a) : nlohmann::json(nullptr)},
          {"entry_residual", v.entry_residual},
          {"counterexample", v.counterexample}};
}

std::string to_csv(const MatrixFamily& family, Index n) {
  std::ostringstream out;
  out << std::setprecision(12) << "k,weighted_norm,hs_norm,pairwise\n";
  std::optional<Matrix> prev;
  for (double k : doubling_indices(n)) {
    const Matrix a = family.member(k, n);
    out << k << ',' << weighted_norm(a) << ',' << hs_norm(a) << ',';
    if (prev) out << hs_norm(a - *prev);
    out << '\n';
    prev = a;
  }
  return out.str();
}

std::vector<EntryRuleCase> d_omega_rules() {
  auto d = [](Index m) { return static_cast<double>(m); };
  return {
      {"1/(mn)", [d](Index m, Index n) -> Complex { return 1.0 / (d(m) * d(n)); }, true},
      {"1/sqrt(mn)", [d](Index m, Index n) -> Complex { return 1.0 / std::sqrt(d(m) * d(n)); }, false},
      {"finite_support", [](Index m, Index n) -> Complex { return (m <= 3 && n <= 3) ? Complex(m, -n) : 0.0; }, true},
      {"1/(m+n)", [d](Index m, Index n) -> Complex { return 1.0 / (d(m) + d(n)); }, false},
      {"diag_1/m", [d](Index m, Index n) -> Complex { return m == n ? 1.0 / d(m) : 0.0; }, true},
      {"(mn)^-3/4", [d](Index m, Index n) -> Complex { return std::pow(d(m) * d(n), -0.75); }, true},
  };
}

DOmegaVerdict d_omega_identification(const std::string& name, const EntryRule& rule, const std::vector<Index>& levels) {
  if (levels.size() < 4) throw std::invalid_argument("d_omega_identification: need at least 4 truncation levels");
  DOmegaVerdict v;
  v.rule = name;
  v.levels = levels;
  for (Index n : levels) v.hs_squared.push_back(truncate(rule, n).squaredNorm());
  v.rate = sequence::doubling_rate(v.hs_squared);
  v.member = !v.rate || *v.rate < -0.1;
  return v;
}

nlohmann::json to_json(const DOmegaVerdict& v) {
  return {{"rule", v.rule},
          {"levels", v.levels},
          {"hs_squared", v.hs_squared},
          {"rate", v.rate ? nlohmann::json(*v.rate) : nlohmann::json(nullptr)},
          {"member", v.member}};
}

BaselDiagnostic basel_diagnostic(Index n) {
  if (n < 1) throw std::invalid_argument("basel_diagnostic: N must be positive");
  BaselDiagnostic b;
  b.n = n;
  double partial = 0.0;
  for (Index m = n; m >= 1; --m) partial += 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  const double zeta2 = kPi * kPi / 6.0;
  b.truncated = partial * partial;
  b.exact = zeta2 * zeta2;
  const double nn = static_cast<double>(n);
  b.lower = std::pow(zeta2 - 1.0 / nn, 2);
  b.upper = std::pow(zeta2 - 1.0 / (nn + 1.0), 2);
  return b;
}

}  // namespace quasistar::matrix_lab
