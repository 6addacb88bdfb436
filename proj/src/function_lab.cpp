#include "quasistar/function_lab.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace quasistar::function_lab {

namespace {

void add_simpson_cell(std::vector<double>& nodes, std::vector<double>& weights, double a, double b) {
  const double h = (b - a) / 6.0;
  if (nodes.empty()) {
    nodes.push_back(a);
    weights.push_back(0.0);
  }
  weights.back() += h;
  nodes.push_back(0.5 * (a + b));
  weights.push_back(4.0 * h);
  nodes.push_back(b);
  weights.push_back(h);
}

GridPtr finish(GridKind kind, const std::vector<double>& nodes, const std::vector<double>& weights, double mass,
               double offset = 0.0) {
  auto g = std::make_shared<Grid>();
  g->kind = kind;
  g->nodes = Eigen::Map<const RealVector>(nodes.data(), static_cast<Index>(nodes.size()));
  g->weights = Eigen::Map<const RealVector>(weights.data(), static_cast<Index>(weights.size()));
  g->total_mass = mass;
  g->offset = offset;
  if (g->size() < 32) throw std::invalid_argument("grid: at least 32 nodes required");
  return g;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

std::string Grid::tag() const {
  switch (kind) {
    case GridKind::uniform_simpson: return "uniform_simpson(" + std::to_string(size()) + ")";
    case GridKind::graded_simpson: return "graded_simpson(" + std::to_string(size()) + ")";
    case GridKind::geometric_simpson: return "geometric_simpson(" + std::to_string(size()) + ")";
    case GridKind::gauss_hermite: return "gauss_hermite(" + std::to_string(size()) + ")";
  }
  return "?";
}

GridPtr uniform_simpson(Index n_nodes) {
  if (n_nodes < 33 || n_nodes % 2 == 0) throw std::invalid_argument("uniform_simpson: need an odd node count >= 33");
  std::vector<double> nodes, weights;
  const Index cells = (n_nodes - 1) / 2;
  for (Index c = 0; c < cells; ++c) {
    add_simpson_cell(nodes, weights, static_cast<double>(c) / cells, static_cast<double>(c + 1) / cells);
  }
  nodes.back() = 1.0;
  return finish(GridKind::uniform_simpson, nodes, weights, 1.0, 0.5 / static_cast<double>(n_nodes - 1));
}

GridPtr graded_simpson(Index panels, double grading) {
  if (panels < 16) throw std::invalid_argument("graded_simpson: need at least 16 panels");
  if (grading < 1.0) throw std::invalid_argument("graded_simpson: grading exponent must be >= 1");
  std::vector<double> t, wt;
  for (Index c = 0; c < panels; ++c) {
    add_simpson_cell(t, wt, static_cast<double>(c) / panels, static_cast<double>(c + 1) / panels);
  }
  std::vector<double> nodes, weights;
  for (std::size_t i = 1; i < t.size(); ++i) {
    nodes.push_back(std::pow(t[i], grading));
    weights.push_back(wt[i] * grading * std::pow(t[i], grading - 1.0));
  }
  return finish(GridKind::graded_simpson, nodes, weights, 1.0);
}

GridPtr geometric_simpson(int octaves, int cells_per_octave) {
  if (octaves < 40 || octaves > 1000) throw std::invalid_argument("geometric_simpson: octaves must lie in [40, 1000]");
  if (cells_per_octave < 1) throw std::invalid_argument("geometric_simpson: cells_per_octave must be positive");
  std::vector<double> nodes, weights;
  for (int o = octaves - 1; o >= 0; --o) {
    const double a = std::ldexp(1.0, -(o + 1));
    const double b = std::ldexp(1.0, -o);
    for (int j = 0; j < cells_per_octave; ++j) {
      add_simpson_cell(nodes, weights, a + (b - a) * j / cells_per_octave, a + (b - a) * (j + 1) / cells_per_octave);
    }
  }
  return finish(GridKind::geometric_simpson, nodes, weights, 1.0 - std::ldexp(1.0, -octaves));
}

GridPtr gauss_hermite(Index n_nodes) {
  if (n_nodes < 32) throw std::invalid_argument("gauss_hermite: at least 32 nodes required");
  RealMatrix jacobi = RealMatrix::Zero(n_nodes, n_nodes);
  for (Index k = 1; k < n_nodes; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(jacobi);
  const double mass = std::sqrt(2.0 * kPi);
  std::vector<double> nodes(static_cast<std::size_t>(n_nodes)), weights(static_cast<std::size_t>(n_nodes));
  for (Index i = 0; i < n_nodes; ++i) {
    nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = mass * v0 * v0;
  }
  return finish(GridKind::gauss_hermite, nodes, weights, mass);
}

// --- GridFunction -------------------------------------------------------------

GridFunction::GridFunction(GridPtr grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("GridFunction: null grid");
  require_same_dim(values_.size(), grid_->size(), "GridFunction");
}

GridFunction GridFunction::sample(GridPtr grid, const ScalarFn& fn) {
  Vector v(grid->size());
  for (Index i = 0; i < v.size(); ++i) {
    Complex y = fn(grid->nodes(i));
    if (!std::isfinite(std::abs(y)) && grid->nodes(i) == 0.0 && grid->offset > 0.0) y = fn(grid->offset);
    if (!std::isfinite(std::abs(y))) {
      throw std::domain_error("GridFunction::sample: non-finite value at x = " + std::to_string(grid->nodes(i)));
    }
    v(i) = y;
  }
  return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::constant(GridPtr grid, Complex c) {
  const Index n = grid->size();
  return GridFunction(std::move(grid), Vector::Constant(n, c));
}

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* where) {
  if (a.grid() == b.grid()) return;
  if (a.grid()->kind != b.grid()->kind || a.grid()->nodes != b.grid()->nodes) {
    throw DimensionMismatch(std::string(where) + ": grid mismatch (" + a.grid()->tag() + " vs " + b.grid()->tag() + ")");
  }
}

GridFunction GridFunction::conj() const { return GridFunction(grid_, values_.conjugate()); }

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "GridFunction +");
  return GridFunction(a.grid_, a.values_ + b.values_);
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "GridFunction -");
  return GridFunction(a.grid_, a.values_ - b.values_);
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b, "GridFunction *");
  return GridFunction(a.grid_, a.values_.cwiseProduct(b.values_));
}

GridFunction operator*(Complex s, const GridFunction& a) { return GridFunction(a.grid_, s * a.values_); }

Complex integrate(const GridFunction& f) {
  return (f.grid()->weights.cast<Complex>().array() * f.values().array()).sum();
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const double s = (f.grid()->weights.array() * f.values().array().abs().pow(p)).sum();
  return std::pow(s, 1.0 / p);
}

Complex omega_form(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f, g, "omega_form");
  return (f.grid()->weights.cast<Complex>().array() * f.values().array() * g.values().array().conjugate()).sum();
}

Complex omega_form(const GridFunction& f, const GridFunction& g, const GridFunction& w) {
  require_same_grid(f, g, "omega_form");
  require_same_grid(f, w, "omega_form");
  return (f.grid()->weights.cast<Complex>().array() * f.values().array() * g.values().array().conjugate() *
          w.values().array())
      .sum();
}

// --- families -----------------------------------------------------------------

TestFamily tent_family(double height_exponent) {
  TestFamily fam;
  fam.generator = "tent";
  fam.parameters = {height_exponent};
  fam.member = [height_exponent](double n) -> ScalarFn {
    const double h = std::pow(n, height_exponent);
    return [h, n](double x) { return Complex(h * std::max(0.0, 1.0 - n * x), 0.0); };
  };
  return fam;
}

TestFamily power_function(double beta) {
  TestFamily fam;
  fam.generator = "power";
  fam.parameters = {beta};
  fam.member = [beta](double) -> ScalarFn { return [beta](double x) { return Complex(std::pow(x, -beta), 0.0); }; };
  return fam;
}

TestFamily trig_family() {
  TestFamily fam;
  fam.generator = "trig";
  fam.member = [](double n) -> ScalarFn { return [n](double x) { return Complex(std::cos(2.0 * kPi * n * x), 0.0); }; };
  return fam;
}

// --- L^p forms: boundedness dichotomy ---------------------------------------

std::string to_string(Boundedness b) { return b == Boundedness::bounded ? "bounded" : "closable-unbounded"; }

Classification boundedness_classifier(double p, std::optional<double> r) {
  if (!(p >= 1.0)) throw std::invalid_argument("boundedness_classifier: p must be >= 1");
  if (r && !(*r >= 1.0)) throw std::invalid_argument("boundedness_classifier: r must be >= 1");
  Classification c;
  c.s = r ? 1.0 / (1.0 / p + 1.0 / (2.0 * *r)) : p;
  if (c.s < 1.0) throw std::invalid_argument("boundedness_classifier: effective exponent s < 1 is out of range");
  c.tag = c.s >= 2.0 ? Boundedness::bounded : Boundedness::closable_unbounded;
  return c;
}

namespace {

WitnessTable tent_witness(double p, const std::optional<GridFunction>& weight, int n_max, GridPtr grid) {
  const Index n_nodes = grid->size();
  const auto fam = tent_family(0.5);
  WitnessTable t;
  t.p = p;
  std::vector<double> lx, ly;
  for (int n = 2; n <= n_max; n *= 2) {
    if (static_cast<Index>(2 * n) > n_nodes - 1) throw std::invalid_argument("unboundedness_witness: n_max exceeds grid resolution");
    const auto f = GridFunction::sample(grid, fam.member(n));
    WitnessRow row;
    row.n = n;
    row.lp_norm = lp_norm(f, p);
    row.form = weight ? omega_form(f, f, *weight).real() : omega_form(f, f).real();
    row.ratio = row.form / (row.lp_norm * row.lp_norm);
    lx.push_back(std::log(row.n));
    ly.push_back(std::log(row.ratio));
    t.rows.push_back(row);
  }
  t.exponent = least_squares_slope(lx, ly);
  return t;
}

}  // namespace

WitnessTable unboundedness_witness(double p, int n_max, Index n_nodes) {
  if (!(p >= 1.0)) throw std::invalid_argument("unboundedness_witness: p must be >= 1");
  if (n_max < 4) throw std::invalid_argument("unboundedness_witness: n_max must be >= 4");
  return tent_witness(p, std::nullopt, n_max, uniform_simpson(n_nodes));
}

WitnessTable weighted_witness(double p, double gamma, int n_max, Index n_nodes) {
  if (!(p >= 1.0)) throw std::invalid_argument("weighted_witness: p must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("weighted_witness: gamma must lie in [0, 1)");
  if (n_max < 4) throw std::invalid_argument("weighted_witness: n_max must be >= 4");
  auto grid = uniform_simpson(n_nodes);
  auto w = GridFunction::sample(grid, [gamma](double x) { return Complex(std::pow(x, -gamma), 0.0); });
  return tent_witness(p, w, n_max, grid);
}

std::string to_csv(const WitnessTable& t) {
  std::ostringstream out;
  out << std::setprecision(12) << "n,norm,form,ratio\n";
  for (const auto& r : t.rows) out << r.n << ',' << r.lp_norm << ',' << r.form << ',' << r.ratio << '\n';
  return out.str();
}

nlohmann::json to_json(const WitnessTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"n", r.n}, {"norm", r.lp_norm}, {"form", r.form}, {"ratio", r.ratio}});
  return {{"p", t.p}, {"exponent", t.exponent}, {"rows", std::move(rows)}};
}

RefinementVerdict refinement_test(const ScalarFn& g, int first_level, int last_level) {
  if (last_level - first_level < 2) throw std::invalid_argument("refinement_test: need at least 3 levels");
  RefinementVerdict v;
  for (int level = first_level; level <= last_level; ++level) {
    const auto grid = graded_simpson(Index{1} << level);
    double sum = 0.0;
    for (Index i = 0; i < grid->size(); ++i) sum += grid->weights(i) * g(grid->nodes(i)).real();
    v.values.push_back(sum);
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) {
      v.member = false;
      v.rate = std::numeric_limits<double>::infinity();
      return v;
    }
  }
  v.rate = sequence::doubling_rate(v.values);
  v.member = !v.rate || *v.rate < -0.1;
  return v;
}

MembershipVerdict a_omega_membership(const ScalarFn& f, double p) {
  if (!(p >= 1.0 && p < 2.0)) throw std::invalid_argument("a_omega_membership: requires 1 <= p < 2");
  MembershipVerdict v;
  v.p = p;
  v.l2 = refinement_test([&f](double x) { return Complex(std::norm(f(x)), 0.0); });
  return v;
}

double ls_exponent(double p) {
  if (!(p > 2.0)) throw std::invalid_argument("ls_exponent: requires p > 2");
  return 2.0 * p / (p - 2.0);
}

LsVerdict ls_membership(const ScalarFn& f, double p) {
  LsVerdict v;
  v.p = p;
  v.s = ls_exponent(p);
  const double s = v.s;
  v.ls = refinement_test([&f, s](double x) { return Complex(std::pow(std::abs(f(x)), s), 0.0); });
  v.cross_validated = true;
  for (double delta : {1e-2, 1e-3}) {
    CrossCheck c;
    c.alpha = 1.0 / p - delta;
    const double alpha = c.alpha;
    c.product = refinement_test([&f, alpha](double x) { return Complex(std::norm(f(x)) * std::pow(x, -2.0 * alpha), 0.0); });
    v.cross_validated = v.cross_validated && c.product.member == v.ls.member;
    v.cross.push_back(c);
  }
  return v;
}

nlohmann::json to_json(const LsVerdict& v) {
  auto rate = [](const RefinementVerdict& r) { return r.rate ? nlohmann::json(*r.rate) : nlohmann::json(nullptr); };
  nlohmann::json cross = nlohmann::json::array();
  for (const auto& c : v.cross) cross.push_back({{"alpha", c.alpha}, {"member", c.product.member}, {"rate", rate(c.product)}});
  return {{"p", v.p}, {"s", v.s}, {"member", v.ls.member}, {"rate", rate(v.ls)}, {"cross", std::move(cross)},
          {"cross_validated", v.cross_validated}};
}

forms::FormContext<GridFunction> lp_form_context(GridPtr grid, double p, std::optional<GridFunction> weight) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_form_context: p must be >= 1");
  if (weight) require_same_grid(GridFunction::constant(grid, 1.0), *weight, "lp_form_context");
  forms::FormContext<GridFunction> ctx;
  ctx.name = weight ? "Lp_weighted" : "Lp";
  ctx.ambient_norm = [p](const GridFunction& f) { return lp_norm(f, p); };
  if (weight) {
    ctx.form = [w = *weight](const GridFunction& f, const GridFunction& g) { return omega_form(f, g, w); };
  } else {
    ctx.form = [](const GridFunction& f, const GridFunction& g) { return omega_form(f, g); };
  }
  ctx.subtract = [](const GridFunction& a, const GridFunction& b) { return a - b; };
  ctx.involution = [](const GridFunction& a) { return a.conj(); };
  ctx.multiply = [](const GridFunction& a, const GridFunction& b) { return a * b; };
  ctx.unit = GridFunction::constant(grid, 1.0);
  return ctx;
}

// --- Gaussian space -----------------------------------------------------------

std::vector<Complex> hermite_coefficients(int n) {
  if (n < 0) throw std::invalid_argument("hermite_coefficients: n must be >= 0");
  std::vector<Complex> prev{1.0}, cur{0.0, 1.0};
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    std::vector<Complex> next(static_cast<std::size_t>(k + 2), 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= static_cast<double>(k) * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

GaussianProbeVerdict gaussian_poly_probe(std::string family, const std::vector<std::vector<Complex>>& coeffs,
                                         Index n_nodes) {
  if (n_nodes < 64) throw std::invalid_argument("gaussian_poly_probe: at least 64 Gauss-Hermite nodes required");
  if (coeffs.size() < 3) throw std::invalid_argument("gaussian_poly_probe: need at least 3 polynomials");
  const auto grid = gauss_hermite(n_nodes);
  const topology::TruncatedTriple triple(grid->weights, RealVector::Ones(grid->size()));

  std::vector<RealVector> envelopes;
  for (int j = 1; j <= 4; ++j) envelopes.push_back((1.0 + grid->nodes.array().square()).pow(-2.0 * j).matrix());

  topology::SeminormFamily fam;
  fam.name = "tauD";
  fam.topology = topology::Topology::uniform;
  for (int j = 1; j <= 4; ++j) fam.labels.push_back("f" + std::to_string(j));
  fam.evaluate = [envelopes](const topology::TruncatedOperator& a) {
    const Vector d = a.dense().diagonal();
    std::vector<double> out;
    for (const auto& e : envelopes) out.push_back((e.array() * d.array().abs()).maxCoeff());
    return out;
  };

  GaussianProbeVerdict v;
  v.family = std::move(family);
  topology::NullFamily null;
  null.name = v.family;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    const auto& c = coeffs[n];
    Index degree = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != Complex(0.0)) degree = static_cast<Index>(i);
    if (degree > n_nodes / 2) throw std::invalid_argument("gaussian_poly_probe: degree exceeds grid resolution");
    Vector values(grid->size());
    for (Index i = 0; i < grid->size(); ++i) {
      Complex acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * grid->nodes(i) + *it;
      values(i) = acc;
    }
    GaussianProbeRow row;
    row.index = static_cast<int>(n + 1);
    row.l1_norm = (grid->weights.array() * values.array().abs()).sum();
    auto op = topology::TruncatedOperator::diagonal(triple, values);
    row.seminorms = fam.evaluate(op);
    null.ambient_norms.push_back(row.l1_norm);
    null.reps.push_back(std::move(op));
    v.rows.push_back(std::move(row));
  }
  const auto verdict = topology::closability_check({null}, fam);
  const auto& r = verdict.families.front();
  v.applicable = r.tau_null;
  v.reps_cauchy = r.reps_cauchy;
  v.limit_seminorm = r.limit_seminorm;
  v.counterexample = v.applicable && r.counterexample;
  return v;
}

nlohmann::json to_json(const GaussianProbeVerdict& v) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : v.rows) rows.push_back({{"n", r.index}, {"l1_norm", r.l1_norm}, {"seminorms", r.seminorms}});
  return {{"family", v.family},           {"applicable", v.applicable},
          {"reps_cauchy", v.reps_cauchy}, {"limit_seminorm", v.limit_seminorm},
          {"counterexample", v.counterexample}, {"rows", std::move(rows)}};
}

// --- multiplication representation --------------------------------------------

topology::TruncatedOperator MultiplicationSetup::mult(const GridFunction& f) const {
  require_same_grid(GridFunction::constant(grid, 1.0), f, "MultiplicationSetup::mult");
  return topology::TruncatedOperator::diagonal(triple, f.values());
}

topology::TruncatedOperator MultiplicationSetup::mult(const ScalarFn& f) const {
  return mult(GridFunction::sample(grid, f));
}

topology::SeminormFamily MultiplicationSetup::family(topology::Topology t) const {
  return topology::make_family(triple, t, suite, probes);
}

MultiplicationSetup multiplication_setup(double p, int octaves) {
  if (!(p > 2.0)) throw std::invalid_argument("multiplication_setup: requires p > 2");
  auto grid = geometric_simpson(octaves);
  topology::TruncatedTriple triple(grid->weights, RealVector::Ones(grid->size()));
  const Index n = grid->size();

  auto normalized = [&](Vector v) {
    v /= triple.norm(v);
    return v;
  };

  std::vector<Vector> indicators;
  for (int j = 0; j <= octaves - 40; j += 4) {
    const double delta = std::ldexp(1.0, -j);
    Vector v = (grid->nodes.array() <= delta).cast<double>().cast<Complex>().matrix();
    indicators.push_back(normalized(v));
  }
  topology::BoundedSet local{"indicators", Matrix(n, static_cast<Index>(indicators.size()))};
  for (std::size_t i = 0; i < indicators.size(); ++i) local.vectors.col(static_cast<Index>(i)) = indicators[i];

  topology::BoundedSet trig{"trig", Matrix(n, 5)};
  trig.vectors.col(0) = normalized(Vector::Ones(n));
  for (int k = 1; k <= 2; ++k) {
    Vector c(n), s(n);
    for (Index i = 0; i < n; ++i) {
      c(i) = std::cos(2.0 * kPi * k * grid->nodes(i));
      s(i) = std::sin(2.0 * kPi * k * grid->nodes(i));
    }
    trig.vectors.col(2 * k - 1) = normalized(c);
    trig.vectors.col(2 * k) = normalized(s);
  }

  Matrix probes(n, 5);
  const double alphas[] = {0.0, 0.4 / p, 0.8 / p};
  for (int a = 0; a < 3; ++a)
    for (Index i = 0; i < n; ++i) probes(i, a) = std::pow(grid->nodes(i), -alphas[a]);
  for (int k = 1; k <= 2; ++k)
    for (Index i = 0; i < n; ++i) probes(i, 2 + k) = std::cos(2.0 * kPi * k * grid->nodes(i));

  return MultiplicationSetup{std::move(grid), p, std::move(triple), {std::move(local), std::move(trig)}, std::move(probes)};
}

std::vector<double> dyadic_cutoffs(int steps, int step) {
  if (steps < 1 || step < 1) throw std::invalid_argument("dyadic_cutoffs: steps and step must be positive");
  std::vector<double> eps;
  for (int k = 1; k <= steps; ++k) eps.push_back(std::ldexp(1.0, -step * k));
  return eps;
}

Approximation clamp_approximation(std::string name, ScalarFn f, const std::vector<double>& cutoffs) {
  Approximation a{std::move(name), f, {}};
  for (double e : cutoffs) a.members.push_back([f, e](double x) { return f(std::max(x, e)); });
  return a;
}

Approximation shift_approximation(std::string name, ScalarFn f, const std::vector<double>& cutoffs) {
  Approximation a{std::move(name), f, {}};
  for (double e : cutoffs) a.members.push_back([f, e](double x) { return f(x + e); });
  return a;
}

ScalarFn log_oscillation() {
  return [](double x) { return Complex(std::cos(2.0 * kPi * std::log2(x)), 0.0); };
}

OperatorRun run_extension(const MultiplicationSetup& setup, const Approximation& approx, topology::Topology t) {
  if (approx.members.empty()) throw std::invalid_argument("run_extension: empty approximation");
  const auto target = GridFunction::sample(setup.grid, approx.target);
  OperatorRun run;
  std::vector<topology::TruncatedOperator> reps;
  for (const auto& m : approx.members) {
    const auto fm = GridFunction::sample(setup.grid, m);
    run.ambient.push_back(lp_norm(fm - target, 1.0));
    reps.push_back(setup.mult(fm));
  }
  run.result = topology::extend_by_closure(run.ambient, reps, setup.family(t));
  return run;
}

}  // namespace quasistar::function_lab
