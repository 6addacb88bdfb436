/**
 * @file ccr.hpp
 * @brief The CCR algebra on [0,1]: formal polynomials Q = sum_k phi_k p^k with
 *        trigonometric-polynomial coefficients, their product and involution,
 *        and the spectral representation pi_o(Q) = sum_k phi_k^ P^k on the
 *        Fourier basis e_n(x) = exp(2 pi i n x), |n| <= N.
 *
 * The symbolic layer is templated on the scalar. Complex is the numeric
 * instance; TauPolynomial (polynomials in tau = 2 pi over the Gaussian
 * rationals) makes products, derivatives and adjoints exact.
 *
 * Product:
 *   Q1 Q2 = sum_{k,l} phi_k sum_{r<=k} (-i)^r C(k,r) psi_l^{(r)} p^{k-r+l}
 * Involution:
 *   Q* = sum_k sum_{r<=k} (-i)^r C(k,r) conj(phi_k)^{(r)} p^{k-r}
 */

#pragma once

#include "quasistar/common.hpp"
#include "quasistar/topology.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace quasistar::ccr {

/// Rational with 128-bit numerator and denominator, kept in lowest terms.
/// Every operation checks for overflow and throws rather than rounding.
class Rational {
 public:
  using Int = __int128;

  Rational(long long n = 0) : num_(n), den_(1) {}
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  Int numerator() const noexcept { return num_; }
  Int denominator() const noexcept { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend Rational operator-(const Rational& a) { return make(checked_sub(0, a.num_), a.den_); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return make(checked_add(a.num_, b.num_), a.den_);
    return make(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)), checked_mul(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.num_ == 0 || b.num_ == 0) return {};
    const Int g1 = gcd(a.num_, b.den_);
    const Int g2 = gcd(b.num_, a.den_);
    return make(checked_mul(a.num_ / g1, b.num_ / g2), checked_mul(a.den_ / g2, b.den_ / g1));
  }
  std::string str() const;

 private:
  static Rational make(Int n, Int d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }
  static Int gcd(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const Int t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  static Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }
  static Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }
  static Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rational: overflow");
    return r;
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const Int g = gcd(num_, den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Int num_;
  Int den_;
};

struct GaussianRational {
  Rational re{0};
  Rational im{0};

  bool is_zero() const { return re == 0 && im == 0; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) { return a.re == b.re && a.im == b.im; }
  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational conj() const { return {re, -im}; }
  Complex to_complex() const { return {re.to_double(), im.to_double()}; }
};

/// sum_j c_j tau^j with tau = 2 pi.
class TauPolynomial {
 public:
  TauPolynomial() = default;
  explicit TauPolynomial(GaussianRational c) {
    if (!c.is_zero()) c_.push_back(std::move(c));
  }
  TauPolynomial(std::vector<GaussianRational> c) : c_(std::move(c)) { trim(); }

  const std::vector<GaussianRational>& coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  Complex to_complex() const;

  friend bool operator==(const TauPolynomial& a, const TauPolynomial& b) { return a.c_ == b.c_; }
  friend TauPolynomial operator+(const TauPolynomial& a, const TauPolynomial& b);
  friend TauPolynomial operator-(const TauPolynomial& a, const TauPolynomial& b);
  friend TauPolynomial operator*(const TauPolynomial& a, const TauPolynomial& b);
  TauPolynomial conj() const;

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<GaussianRational> c_;
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  static Complex zero() { return 0.0; }
  static Complex from_int(long long n) { return static_cast<double>(n); }
  /// (-i)^r
  static Complex minus_i_pow(int r) {
    static const Complex table[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    return table[r % 4];
  }
  /// d/dx e_n = (2 pi i n) e_n
  static Complex derivative_factor(int n) { return {0.0, 2.0 * kPi * n}; }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static bool is_zero(const Complex& z) { return z == Complex(0.0); }
};

template <>
struct ScalarTraits<TauPolynomial> {
  static TauPolynomial zero() { return {}; }
  static TauPolynomial from_int(long long n) { return TauPolynomial(GaussianRational{Rational(n), Rational(0)}); }
  static TauPolynomial minus_i_pow(int r) {
    static const int re[4] = {1, 0, -1, 0};
    static const int im[4] = {0, -1, 0, 1};
    return TauPolynomial(GaussianRational{Rational(re[r % 4]), Rational(im[r % 4])});
  }
  static TauPolynomial derivative_factor(int n) {
    return TauPolynomial(std::vector<GaussianRational>{GaussianRational{}, GaussianRational{Rational(0), Rational(n)}});
  }
  static TauPolynomial conj(const TauPolynomial& z) { return z.conj(); }
  static bool is_zero(const TauPolynomial& z) { return z.is_zero(); }
};

// --- trigonometric polynomials ------------------------------------------------

template <class S>
class TrigPolyT {
 public:
  using Traits = ScalarTraits<S>;

  TrigPolyT() = default;
  explicit TrigPolyT(std::map<int, S> fourier) : c_(std::move(fourier)) { trim(); }
  static TrigPolyT mode(int n, S c = Traits::from_int(1)) { return TrigPolyT(std::map<int, S>{{n, std::move(c)}}); }
  static TrigPolyT constant(S c) { return mode(0, std::move(c)); }

  const std::map<int, S>& fourier() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// Largest |n| with a nonzero coefficient (0 for the zero polynomial).
  int max_frequency() const {
    int f = 0;
    for (const auto& [n, c] : c_) f = std::max(f, std::abs(n));
    return f;
  }
  S coefficient(int n) const {
    auto it = c_.find(n);
    return it == c_.end() ? Traits::zero() : it->second;
  }

  /// Exact r-th derivative: c_n -> (2 pi i n)^r c_n.
  TrigPolyT derivative(int r = 1) const {
    std::map<int, S> out;
    for (const auto& [n, c] : c_) {
      S v = c;
      for (int j = 0; j < r; ++j) v = v * Traits::derivative_factor(n);
      out.emplace(n, std::move(v));
    }
    return TrigPolyT(std::move(out));
  }

  /// Pointwise conjugate: c_n -> conj(c_{-n}).
  TrigPolyT conj() const {
    std::map<int, S> out;
    for (const auto& [n, c] : c_) out.emplace(-n, Traits::conj(c));
    return TrigPolyT(std::move(out));
  }

  friend bool operator==(const TrigPolyT& a, const TrigPolyT& b) { return a.c_ == b.c_; }
  friend TrigPolyT operator+(const TrigPolyT& a, const TrigPolyT& b) {
    std::map<int, S> out = a.c_;
    for (const auto& [n, c] : b.c_) {
      auto it = out.find(n);
      if (it == out.end()) out.emplace(n, c);
      else it->second = it->second + c;
    }
    return TrigPolyT(std::move(out));
  }
  friend TrigPolyT operator-(const TrigPolyT& a, const TrigPolyT& b) {
    return a + b * Traits::from_int(-1);
  }
  /// Pointwise product (Fourier convolution).
  friend TrigPolyT operator*(const TrigPolyT& a, const TrigPolyT& b) {
    std::map<int, S> out;
    for (const auto& [m, x] : a.c_) {
      for (const auto& [n, y] : b.c_) {
        auto it = out.find(m + n);
        if (it == out.end()) out.emplace(m + n, x * y);
        else it->second = it->second + x * y;
      }
    }
    return TrigPolyT(std::move(out));
  }
  friend TrigPolyT operator*(const TrigPolyT& a, const S& s) {
    std::map<int, S> out;
    for (const auto& [n, c] : a.c_) out.emplace(n, c * s);
    return TrigPolyT(std::move(out));
  }

 private:
  void trim() {
    for (auto it = c_.begin(); it != c_.end();) {
      if (Traits::is_zero(it->second)) it = c_.erase(it);
      else ++it;
    }
  }
  std::map<int, S> c_;
};

// --- CCR polynomials ----------------------------------------------------------

template <class S>
class CCRPolynomialT {
 public:
  using Trig = TrigPolyT<S>;

  CCRPolynomialT() = default;
  explicit CCRPolynomialT(std::vector<Trig> coeffs) : c_(std::move(coeffs)) { trim(); }
  /// The generator p.
  static CCRPolynomialT p() { return CCRPolynomialT({Trig{}, Trig::constant(ScalarTraits<S>::from_int(1))}); }
  static CCRPolynomialT scalar(Trig phi) { return CCRPolynomialT({std::move(phi)}); }

  const std::vector<Trig>& coeffs() const noexcept { return c_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }
  int max_frequency() const {
    int f = 0;
    for (const auto& c : c_) f = std::max(f, c.max_frequency());
    return f;
  }
  const Trig& coeff(int k) const {
    static const Trig zero;
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<std::size_t>(k)] : zero;
  }

  friend bool operator==(const CCRPolynomialT& a, const CCRPolynomialT& b) { return a.c_ == b.c_; }
  friend CCRPolynomialT operator+(const CCRPolynomialT& a, const CCRPolynomialT& b) {
    std::vector<Trig> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return CCRPolynomialT(std::move(out));
  }
  friend CCRPolynomialT operator-(const CCRPolynomialT& a, const CCRPolynomialT& b) {
    std::vector<Trig> out(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
    return CCRPolynomialT(std::move(out));
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Trig> c_;
};

inline long long binomial(int k, int r) {
  long long b = 1;
  for (int j = 1; j <= r; ++j) b = b * (k - r + j) / j;
  return b;
}

template <class S>
CCRPolynomialT<S> ccr_mul(const CCRPolynomialT<S>& q1, const CCRPolynomialT<S>& q2) {
  using T = ScalarTraits<S>;
  if (q1.is_zero() || q2.is_zero()) return {};
  std::vector<TrigPolyT<S>> out(static_cast<std::size_t>(q1.degree() + q2.degree() + 1));
  for (int k = 0; k <= q1.degree(); ++k) {
    const auto& phi = q1.coeff(k);
    if (phi.is_zero()) continue;
    for (int l = 0; l <= q2.degree(); ++l) {
      const auto& psi = q2.coeff(l);
      if (psi.is_zero()) continue;
      for (int r = 0; r <= k; ++r) {
        const S factor = T::minus_i_pow(r) * T::from_int(binomial(k, r));
        auto& slot = out[static_cast<std::size_t>(k - r + l)];
        slot = slot + (phi * psi.derivative(r)) * factor;
      }
    }
  }
  return CCRPolynomialT<S>(std::move(out));
}

template <class S>
CCRPolynomialT<S> ccr_star(const CCRPolynomialT<S>& q) {
  using T = ScalarTraits<S>;
  if (q.is_zero()) return {};
  std::vector<TrigPolyT<S>> out(static_cast<std::size_t>(q.degree() + 1));
  for (int k = 0; k <= q.degree(); ++k) {
    const auto bar = q.coeff(k).conj();
    if (bar.is_zero()) continue;
    for (int r = 0; r <= k; ++r) {
      auto& slot = out[static_cast<std::size_t>(k - r)];
      slot = slot + bar.derivative(r) * (T::minus_i_pow(r) * T::from_int(binomial(k, r)));
    }
  }
  return CCRPolynomialT<S>(std::move(out));
}

using TrigPoly = TrigPolyT<Complex>;
using CCRPolynomial = CCRPolynomialT<Complex>;
using ExactTrigPoly = TrigPolyT<TauPolynomial>;
using ExactCCRPolynomial = CCRPolynomialT<TauPolynomial>;

CCRPolynomial to_numeric(const ExactCCRPolynomial& q);

/// Random exact polynomial: degree <= max_degree, frequencies |n| <= max_frequency,
/// Gaussian-rational coefficients with small numerators and denominators.
ExactCCRPolynomial random_exact(std::mt19937_64& rng, int max_degree, int max_frequency);
CCRPolynomial random_numeric(std::mt19937_64& rng, int max_degree, int max_frequency);
TrigPoly random_trig(std::mt19937_64& rng, int max_frequency);

// --- serialization ------------------------------------------------------------

/// [[k, [[n, [re, im]], ...]], ...] with zero coefficients omitted.
nlohmann::json to_json(const CCRPolynomial& q);
CCRPolynomial ccr_from_json(const nlohmann::json& j);
std::string to_string(const ExactCCRPolynomial& q);

// --- representation -----------------------------------------------------------

/// Matrix on e_{-N}, ..., e_N; index of e_n is n + N.
struct FourierOperator {
  int n_trunc = 0;
  Matrix matrix;

  Index index(int n) const { return static_cast<Index>(n + n_trunc); }
};

/// M(phi)_{mn} = c_{m-n}: multiplication by phi within the truncation.
Matrix multiplication_matrix(const TrigPoly& phi, int n_trunc);
/// diag(2 pi n).
Matrix momentum_matrix(int n_trunc);
/// sum_k M(phi_k) diag(2 pi n)^k. Requires n_trunc >= F(Q) + 1.
FourierOperator ccr_represent(const CCRPolynomial& q, int n_trunc);

/// Coefficient vector of a trigonometric polynomial on e_{-N..N}.
Vector fourier_vector(const TrigPoly& phi, int n_trunc);

inline constexpr int kMaxGraphOrder = 4;

/// ||(1 + P^2)^k phi|| = sqrt(sum_n (1 + 4 pi^2 n^2)^{2k} |c_n|^2).
double graph_seminorm(const Vector& coeffs, int k, int max_k = kMaxGraphOrder);
double graph_seminorm(const TrigPoly& phi, int k, int max_k = kMaxGraphOrder);

/// Orthonormal Fourier basis with graph weights 1 + 4 pi^2 n^2.
topology::TruncatedTriple fourier_triple(int n_trunc);
topology::TruncatedOperator to_truncated(const FourierOperator& op);

struct SubmultiplicativityReport {
  int k = 0;
  std::size_t samples = 0;
  double max_ratio = 0.0;
  double half_sample_max = 0.0;
  bool stable = false;  ///< finite, and the first half already reaches half the final maximum
};

SubmultiplicativityReport submultiplicativity_probe(int k, const std::vector<std::pair<TrigPoly, TrigPoly>>& samples,
                                                    int n_trunc);

struct HomomorphismReport {
  int n_trunc = 0;
  int safe_radius = 0;            ///< identities checked on |n| <= safe_radius
  double product_residual = 0.0;  ///< relative, pi(Q1 Q2) vs pi(Q1) pi(Q2)
  double adjoint_residual = 0.0;  ///< relative, pi(Q1)^H vs pi(Q1*)
};

/// Requires n_trunc >= F(Q1) + F(Q2) + 1.
HomomorphismReport homomorphism_check(const CCRPolynomial& q1, const CCRPolynomial& q2, int n_trunc);

/// max |[pi(p), pi(phi)] + i pi(phi')| on |n| <= n_trunc - F(phi).
double commutator_residual(const TrigPoly& phi, int n_trunc);

struct FaithfulnessReport {
  std::vector<double> image_norms;  ///< ||pi(Q) e_j||, j = 0..deg Q
  bool vanishes = true;
};

/// Low modes e_0, ..., e_deg stand in for u(x) = 1, x, x^2, ....
FaithfulnessReport faithfulness_probe(const CCRPolynomial& q, int n_trunc, double tol = 1e-12);

/// sup_{f,g in M} |<pi(Phi) f, g>| computed from the matrix and from the pairing
/// <Phi, conj(f) g> over the products M.M; the two must agree.
struct SeminormEquivalence {
  double operator_side = 0.0;
  double pairing_side = 0.0;
};

SeminormEquivalence seminorm_equivalence(const TrigPoly& phi, const std::vector<TrigPoly>& m, int n_trunc);

}  // namespace quasistar::ccr
