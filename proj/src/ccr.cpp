#include "quasistar/ccr.hpp"

#include "quasistar/json_io.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace quasistar::ccr {

std::string Rational::str() const {
  auto digits = [](Int v) {
    const bool neg = v < 0;
    std::string s;
    do {
      const int d = static_cast<int>(v % 10);
      s.push_back(static_cast<char>('0' + (d < 0 ? -d : d)));
      v /= 10;
    } while (v != 0);
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
  };
  return den_ == 1 ? digits(num_) : digits(num_) + "/" + digits(den_);
}

// --- TauPolynomial ------------------------------------------------------------

Complex TauPolynomial::to_complex() const {
  Complex acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * (2.0 * kPi) + it->to_complex();
  return acc;
}

TauPolynomial operator+(const TauPolynomial& a, const TauPolynomial& b) {
  std::vector<GaussianRational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (j < a.c_.size()) out[j] = out[j] + a.c_[j];
    if (j < b.c_.size()) out[j] = out[j] + b.c_[j];
  }
  return TauPolynomial(std::move(out));
}

TauPolynomial operator-(const TauPolynomial& a, const TauPolynomial& b) {
  std::vector<GaussianRational> out(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (j < a.c_.size()) out[j] = out[j] + a.c_[j];
    if (j < b.c_.size()) out[j] = out[j] - b.c_[j];
  }
  return TauPolynomial(std::move(out));
}

TauPolynomial operator*(const TauPolynomial& a, const TauPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<GaussianRational> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = out[i + j] + a.c_[i] * b.c_[j];
  return TauPolynomial(std::move(out));
}

TauPolynomial TauPolynomial::conj() const {
  std::vector<GaussianRational> out;
  out.reserve(c_.size());
  for (const auto& c : c_) out.push_back(c.conj());
  return TauPolynomial(std::move(out));
}

// --- conversion, random generation --------------------------------------------

CCRPolynomial to_numeric(const ExactCCRPolynomial& q) {
  std::vector<TrigPoly> out;
  for (const auto& c : q.coeffs()) {
    std::map<int, Complex> f;
    for (const auto& [n, v] : c.fourier()) f.emplace(n, v.to_complex());
    out.emplace_back(std::move(f));
  }
  return CCRPolynomial(std::move(out));
}

namespace {

Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  const int n = num(rng);
  return Rational(n, den(rng));
}

}  // namespace

ExactCCRPolynomial random_exact(std::mt19937_64& rng, int max_degree, int max_frequency) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::bernoulli_distribution keep(0.6);
  const int d = deg(rng);
  std::vector<ExactTrigPoly> coeffs;
  for (int k = 0; k <= d; ++k) {
    std::map<int, TauPolynomial> f;
    for (int n = -max_frequency; n <= max_frequency; ++n) {
      if (!keep(rng)) continue;
      f.emplace(n, TauPolynomial(GaussianRational{small_rational(rng), small_rational(rng)}));
    }
    coeffs.emplace_back(std::move(f));
  }
  return ExactCCRPolynomial(std::move(coeffs));
}

CCRPolynomial random_numeric(std::mt19937_64& rng, int max_degree, int max_frequency) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  const int d = deg(rng);
  std::vector<TrigPoly> coeffs;
  for (int k = 0; k <= d; ++k) coeffs.push_back(random_trig(rng, max_frequency));
  return CCRPolynomial(std::move(coeffs));
}

TrigPoly random_trig(std::mt19937_64& rng, int max_frequency) {
  std::normal_distribution<double> normal;
  std::map<int, Complex> f;
  for (int n = -max_frequency; n <= max_frequency; ++n) f.emplace(n, Complex(normal(rng), normal(rng)));
  return TrigPoly(std::move(f));
}

// --- serialization ------------------------------------------------------------

nlohmann::json to_json(const CCRPolynomial& q) {
  nlohmann::json out = nlohmann::json::array();
  for (int k = 0; k <= q.degree(); ++k) {
    const auto& c = q.coeff(k);
    if (c.is_zero()) continue;
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& [n, v] : c.fourier()) modes.push_back({n, io::complex_to_json(v)});
    out.push_back({k, std::move(modes)});
  }
  return out;
}

CCRPolynomial ccr_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("CCR polynomial: expected a list of [k, modes]");
  std::map<int, std::map<int, Complex>> by_power;
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer() || !term[1].is_array()) {
      throw std::invalid_argument("CCR polynomial: each term must be [k, [[n, [re, im]], ...]]");
    }
    const int k = term[0].get<int>();
    if (k < 0) throw std::invalid_argument("CCR polynomial: negative power");
    for (const auto& mode : term[1]) {
      if (!mode.is_array() || mode.size() != 2 || !mode[0].is_number_integer()) {
        throw std::invalid_argument("CCR polynomial: each mode must be [n, [re, im]]");
      }
      auto& slot = by_power[k][mode[0].get<int>()];
      slot += io::complex_from_json(mode[1]);
    }
  }
  std::vector<TrigPoly> coeffs;
  for (const auto& [k, modes] : by_power) {
    if (coeffs.size() <= static_cast<std::size_t>(k)) coeffs.resize(static_cast<std::size_t>(k) + 1);
    coeffs[static_cast<std::size_t>(k)] = TrigPoly(modes);
  }
  return CCRPolynomial(std::move(coeffs));
}

std::string to_string(const ExactCCRPolynomial& q) {
  std::ostringstream out;
  for (int k = 0; k <= q.degree(); ++k) {
    for (const auto& [n, v] : q.coeff(k).fourier()) {
      out << "p^" << k << " e_" << n << ":";
      for (std::size_t j = 0; j < v.coeffs().size(); ++j) {
        out << " (" << v.coeffs()[j].re.str() << ")+(" << v.coeffs()[j].im.str() << ")i tau^" << j;
      }
      out << '\n';
    }
  }
  return out.str();
}

// --- representation -----------------------------------------------------------

Matrix multiplication_matrix(const TrigPoly& phi, int n_trunc) {
  if (n_trunc < 0) throw std::invalid_argument("multiplication_matrix: negative truncation");
  const Index dim = 2 * n_trunc + 1;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& [shift, c] : phi.fourier()) {
    for (int n = -n_trunc; n <= n_trunc; ++n) {
      const int row = n + shift;
      if (row < -n_trunc || row > n_trunc) continue;
      m(row + n_trunc, n + n_trunc) += c;
    }
  }
  return m;
}

Matrix momentum_matrix(int n_trunc) {
  const Index dim = 2 * n_trunc + 1;
  Vector d(dim);
  for (int n = -n_trunc; n <= n_trunc; ++n) d(n + n_trunc) = 2.0 * kPi * n;
  return d.asDiagonal();
}

FourierOperator ccr_represent(const CCRPolynomial& q, int n_trunc) {
  if (n_trunc < q.max_frequency() + 1) {
    throw std::invalid_argument("ccr_represent: truncation N = " + std::to_string(n_trunc) +
                                " too small for max frequency " + std::to_string(q.max_frequency()));
  }
  const Index dim = 2 * n_trunc + 1;
  FourierOperator op{n_trunc, Matrix::Zero(dim, dim)};
  RealVector p(dim);
  for (int n = -n_trunc; n <= n_trunc; ++n) p(n + n_trunc) = 2.0 * kPi * n;
  for (int k = 0; k <= q.degree(); ++k) {
    if (q.coeff(k).is_zero()) continue;
    const Vector pk = p.array().pow(k).cast<Complex>().matrix();
    op.matrix += multiplication_matrix(q.coeff(k), n_trunc) * pk.asDiagonal();
  }
  return op;
}

Vector fourier_vector(const TrigPoly& phi, int n_trunc) {
  if (phi.max_frequency() > n_trunc) throw std::invalid_argument("fourier_vector: frequency beyond truncation");
  Vector v = Vector::Zero(2 * n_trunc + 1);
  for (const auto& [n, c] : phi.fourier()) v(n + n_trunc) = c;
  return v;
}

double graph_seminorm(const Vector& coeffs, int k, int max_k) {
  if (k < 0 || k > max_k) throw std::invalid_argument("graph_seminorm: k must lie in [0, " + std::to_string(max_k) + "]");
  if (coeffs.size() % 2 == 0) throw std::invalid_argument("graph_seminorm: expected coefficients on e_{-N..N}");
  const int n_trunc = static_cast<int>(coeffs.size() / 2);
  double s = 0.0;
  for (int n = -n_trunc; n <= n_trunc; ++n) {
    const double w = std::pow(1.0 + 4.0 * kPi * kPi * n * n, k);
    s += w * w * std::norm(coeffs(n + n_trunc));
  }
  return std::sqrt(s);
}

double graph_seminorm(const TrigPoly& phi, int k, int max_k) {
  return graph_seminorm(fourier_vector(phi, phi.max_frequency()), k, max_k);
}

topology::TruncatedTriple fourier_triple(int n_trunc) {
  const Index dim = 2 * n_trunc + 1;
  RealVector w(dim);
  for (int n = -n_trunc; n <= n_trunc; ++n) w(n + n_trunc) = 1.0 + 4.0 * kPi * kPi * n * n;
  return topology::TruncatedTriple(RealVector::Ones(dim), w);
}

topology::TruncatedOperator to_truncated(const FourierOperator& op) {
  return topology::TruncatedOperator(fourier_triple(op.n_trunc), op.matrix);
}

SubmultiplicativityReport submultiplicativity_probe(int k, const std::vector<std::pair<TrigPoly, TrigPoly>>& samples,
                                                    int n_trunc) {
  if (samples.empty()) throw std::invalid_argument("submultiplicativity_probe: no samples");
  SubmultiplicativityReport r;
  r.k = k;
  const std::size_t half = (samples.size() + 1) / 2;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [phi, chi] = samples[i];
    if (2 * std::max(phi.max_frequency(), chi.max_frequency()) > n_trunc) {
      throw std::invalid_argument("submultiplicativity_probe: sample frequency exceeds N_trunc / 2");
    }
    const double denom = graph_seminorm(phi, k) * graph_seminorm(chi, k);
    if (denom == 0.0) continue;
    const double ratio = graph_seminorm(phi * chi, k) / denom;
    r.max_ratio = std::max(r.max_ratio, ratio);
    if (i < half) r.half_sample_max = r.max_ratio;
    ++r.samples;
  }
  r.stable = std::isfinite(r.max_ratio) && r.half_sample_max >= 0.5 * r.max_ratio;
  return r;
}

namespace {

double max_column_residual(const Matrix& a, const Matrix& b, int n_trunc, int radius) {
  double worst = 0.0;
  for (int n = -radius; n <= radius; ++n) {
    const Index j = n + n_trunc;
    worst = std::max(worst, (a.col(j) - b.col(j)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double max_column_scale(const Matrix& a, int n_trunc, int radius) {
  double s = 0.0;
  for (int n = -radius; n <= radius; ++n) s = std::max(s, a.col(n + n_trunc).cwiseAbs().maxCoeff());
  return s;
}

}  // namespace

HomomorphismReport homomorphism_check(const CCRPolynomial& q1, const CCRPolynomial& q2, int n_trunc) {
  const int f1 = q1.max_frequency();
  const int f2 = q2.max_frequency();
  if (n_trunc < f1 + f2 + 1) {
    throw std::invalid_argument("homomorphism_check: margin violation, need N_trunc >= F(Q1) + F(Q2) + 1");
  }
  HomomorphismReport r;
  r.n_trunc = n_trunc;
  r.safe_radius = n_trunc - f1 - f2;
  const Matrix p1 = ccr_represent(q1, n_trunc).matrix;
  const Matrix p2 = ccr_represent(q2, n_trunc).matrix;
  const Matrix p12 = ccr_represent(ccr_mul(q1, q2), n_trunc).matrix;
  const Matrix prod = p1 * p2;
  const double scale = std::max(1.0, max_column_scale(p12, n_trunc, r.safe_radius));
  r.product_residual = max_column_residual(p12, prod, n_trunc, r.safe_radius) / scale;

  const int adj_radius = n_trunc - f1;
  const Matrix star = ccr_represent(ccr_star(q1), n_trunc).matrix;
  const Matrix adj = p1.adjoint();
  const double adj_scale = std::max(1.0, max_column_scale(star, n_trunc, adj_radius));
  r.adjoint_residual = max_column_residual(star, adj, n_trunc, adj_radius) / adj_scale;
  return r;
}

double commutator_residual(const TrigPoly& phi, int n_trunc) {
  const int f = phi.max_frequency();
  if (n_trunc < f + 1) throw std::invalid_argument("commutator_residual: truncation too small");
  const Matrix p = momentum_matrix(n_trunc);
  const Matrix m = multiplication_matrix(phi, n_trunc);
  const Matrix lhs = p * m - m * p;
  const Matrix rhs = Complex(0.0, -1.0) * multiplication_matrix(phi.derivative(1), n_trunc);
  return max_column_residual(lhs, rhs, n_trunc, n_trunc - f);
}

FaithfulnessReport faithfulness_probe(const CCRPolynomial& q, int n_trunc, double tol) {
  const auto op = ccr_represent(q, n_trunc);
  FaithfulnessReport r;
  const int top = std::max(0, q.degree());
  if (top > n_trunc) throw std::invalid_argument("faithfulness_probe: degree exceeds truncation");
  for (int j = 0; j <= top; ++j) {
    const double norm = op.matrix.col(op.index(j)).norm();
    r.image_norms.push_back(norm);
    if (norm > tol) r.vanishes = false;
  }
  return r;
}

SeminormEquivalence seminorm_equivalence(const TrigPoly& phi, const std::vector<TrigPoly>& m, int n_trunc) {
  SeminormEquivalence r;
  int fm = 0;
  for (const auto& f : m) fm = std::max(fm, f.max_frequency());
  if (n_trunc < fm + phi.max_frequency()) throw std::invalid_argument("seminorm_equivalence: truncation too small");
  const Matrix op = multiplication_matrix(phi, n_trunc);
  for (const auto& f : m) {
    const Vector vf = fourier_vector(f, n_trunc);
    for (const auto& g : m) {
      const Vector vg = fourier_vector(g, n_trunc);
      r.operator_side = std::max(r.operator_side, std::abs(vg.dot(op * vf)));
      // <Phi, h> = sum_n Phi_n conj(h_n), h = conj(f) g
      const TrigPoly h = f.conj() * g;
      Complex pairing = 0.0;
      for (const auto& [n, c] : phi.fourier()) pairing += c * std::conj(h.coefficient(n));
      r.pairing_side = std::max(r.pairing_side, std::abs(pairing));
    }
  }
  return r;
}

}  // namespace quasistar::ccr
