/**
 * @file forms.hpp
 * @brief Positive sesquilinear forms Omega_o(A, B) = omega(B* A), the derived
 *        forms Omega_o* and Omega_B, and numerical closability probes.
 *
 * Everything here is generic in the element type: coefficient vectors of a
 * finite algebra, grid functions, or truncated matrices. A FormContext bundles
 * the ambient norm of the larger space with the form and whatever algebra
 * operations the element domain supports.
 *
 * Closability is certified only as "no counterexample over the registered
 * probe families". A probe family X_n yields a counterexample when
 *   ||X_n|| -> 0,   Omega(X_n - X_m, X_n - X_m) -> 0,   Omega(X_n, X_n) -> L > 0.
 */

#pragma once

#include "quasistar/algebra.hpp"
#include "quasistar/sequence.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace quasistar::forms {

inline constexpr double kCauchyThreshold = 1e-8;
inline constexpr double kCounterexampleFloor = 1e-6;

template <class E>
struct FormContext {
  std::string name;
  std::function<double(const E&)> ambient_norm;
  std::function<Complex(const E&, const E&)> form;
  std::function<E(const E&, const E&)> subtract;
  std::function<E(const E&)> involution;          ///< empty when the domain has none
  std::function<E(const E&, const E&)> multiply;  ///< empty when the domain has none
  std::optional<E> unit;

  Complex operator()(const E& a, const E& b) const { return form(a, b); }
  double diag(const E& a) const { return form(a, a).real(); }
};

/// Named sequence X_n, evaluated at increasing indices.
template <class E>
struct ProbeFamily {
  std::string name;
  std::vector<double> indices;
  std::function<E(double)> member;
};

struct ProbeRow {
  double n = 0.0;
  double tau_norm = 0.0;
  double omega_diag = 0.0;
  double omega_pairwise = std::numeric_limits<double>::quiet_NaN();  ///< vs previous index
};

struct Rates {
  std::optional<double> tau;
  std::optional<double> omega_diag;
  std::optional<double> omega_pairwise;
};

struct SequenceVerdict {
  std::string family;
  bool tau_null = false;
  bool omega_cauchy = false;
  std::optional<double> omega_limit;  ///< present only when omega_cauchy
  Rates rates;
  std::vector<ProbeRow> table;

  bool counterexample() const {
    return tau_null && omega_cauchy && omega_limit && *omega_limit > kCounterexampleFloor;
  }
};

// --- non-template helpers (forms.cpp) ---------------------------------------

SequenceVerdict analyze_probe(std::string family, std::vector<ProbeRow> rows);
nlohmann::json to_json(const SequenceVerdict& v);
/// Columns: n, tau_norm, omega_diag, omega_pairwise.
std::string to_csv(const SequenceVerdict& v);

FormContext<algebra::AlgebraElement> form_from_state(const algebra::StarAlgebra& algebra,
                                                     const algebra::State& omega);

// --- derived forms ------------------------------------------------------------

/// Omega*(X, Y) = Omega(Y*, X*).
template <class E>
FormContext<E> star_form(const FormContext<E>& ctx) {
  if (!ctx.involution) throw std::invalid_argument("star_form: involution undefined on " + ctx.name);
  FormContext<E> out = ctx;
  out.name = ctx.name + "*";
  out.form = [form = ctx.form, inv = ctx.involution](const E& x, const E& y) { return form(inv(y), inv(x)); };
  return out;
}

/// Omega_B(X, Y) = Omega(XB, YB).
template <class E>
FormContext<E> b_shifted_form(const FormContext<E>& ctx, const E& b, std::string label = "B") {
  if (!ctx.multiply) throw std::invalid_argument("b_shifted_form: multiplication undefined on " + ctx.name);
  FormContext<E> out = ctx;
  out.name = ctx.name + "_" + label;
  out.form = [form = ctx.form, mul = ctx.multiply, b](const E& x, const E& y) { return form(mul(x, b), mul(y, b)); };
  return out;
}

// --- closability probe --------------------------------------------------------

template <class E>
SequenceVerdict closability_probe(const FormContext<E>& ctx, const ProbeFamily<E>& family) {
  if (family.indices.empty()) throw std::invalid_argument("closability_probe: empty family " + family.name);
  std::vector<ProbeRow> rows;
  std::optional<E> previous;
  for (double n : family.indices) {
    E x = family.member(n);
    ProbeRow row;
    row.n = n;
    row.tau_norm = ctx.ambient_norm(x);
    row.omega_diag = ctx.diag(x);
    if (previous) {
      const E diff = ctx.subtract(x, *previous);
      row.omega_pairwise = ctx.diag(diff);
    }
    if (!std::isfinite(row.tau_norm) || !std::isfinite(row.omega_diag)) {
      throw std::runtime_error("closability_probe: family " + family.name + " failed at n = " + std::to_string(n));
    }
    rows.push_back(row);
    previous = std::move(x);
  }
  return analyze_probe(family.name, std::move(rows));
}

// --- form axioms --------------------------------------------------------------

struct AxiomReport {
  std::size_t pairs = 0;
  double hermiticity_residual = 0.0;  ///< max |Omega(A,B) - conj Omega(B,A)|
  double min_diagonal = std::numeric_limits<double>::infinity();
  double max_diag_imag = 0.0;
  double cauchy_schwarz_excess = -std::numeric_limits<double>::infinity();  ///< max |Omega(X,Y)|^2 - Omega(X,X)Omega(Y,Y)

  bool ok(double tol = 1e-10) const {
    return hermiticity_residual <= tol && min_diagonal >= -tol && cauchy_schwarz_excess <= tol;
  }
};

/// Residuals are relative to max(1, Omega(X,X) Omega(Y,Y)) on each pair.
template <class E>
AxiomReport check_form_axioms(const FormContext<E>& ctx, const std::vector<std::pair<E, E>>& pairs) {
  AxiomReport r;
  for (const auto& [x, y] : pairs) {
    const Complex xy = ctx(x, y);
    const Complex yx = ctx(y, x);
    const Complex xx = ctx(x, x);
    const Complex yy = ctx(y, y);
    const double scale = std::max(1.0, std::abs(xx) * std::abs(yy));
    const double root_scale = std::sqrt(scale);
    r.hermiticity_residual = std::max(r.hermiticity_residual, std::abs(xy - std::conj(yx)) / root_scale);
    r.min_diagonal = std::min({r.min_diagonal, xx.real() / std::max(1.0, std::abs(xx)), yy.real() / std::max(1.0, std::abs(yy))});
    r.max_diag_imag = std::max({r.max_diag_imag, std::abs(xx.imag()), std::abs(yy.imag())});
    r.cauchy_schwarz_excess =
        std::max(r.cauchy_schwarz_excess, (std::norm(xy) - xx.real() * yy.real()) / scale);
    ++r.pairs;
  }
  return r;
}

// --- equivalence of Omega, Omega* and Omega_B ---------------------------------

struct EquivalenceRow {
  std::string family;
  SequenceVerdict base;
  std::optional<SequenceVerdict> starred;
  std::vector<std::pair<std::string, SequenceVerdict>> shifted;

  bool agree() const {
    const bool c = base.counterexample();
    if (starred && starred->counterexample() != c) return false;
    for (const auto& [label, v] : shifted) {
      if (v.counterexample() != c) return false;
    }
    return true;
  }
};

struct EquivalenceReport {
  std::string context;
  std::vector<EquivalenceRow> rows;

  bool all_agree() const {
    for (const auto& r : rows)
      if (!r.agree()) return false;
    return true;
  }
  std::size_t counterexamples() const {
    std::size_t c = 0;
    for (const auto& r : rows) {
      c += r.base.counterexample();
      if (r.starred) c += r.starred->counterexample();
      for (const auto& [label, v] : r.shifted) c += v.counterexample();
    }
    return c;
  }
};

nlohmann::json to_json(const EquivalenceReport& r);

/// Runs every family through Omega, Omega* and Omega_B for each labelled B.
template <class E>
EquivalenceReport check_lemma24(const FormContext<E>& ctx, const std::vector<ProbeFamily<E>>& families,
                                const std::vector<std::pair<std::string, E>>& bs) {
  EquivalenceReport report;
  report.context = ctx.name;
  std::optional<FormContext<E>> starred;
  if (ctx.involution) starred = star_form(ctx);
  std::vector<std::pair<std::string, FormContext<E>>> shifted;
  for (const auto& [label, b] : bs) shifted.emplace_back(label, b_shifted_form(ctx, b, label));

  for (const auto& family : families) {
    EquivalenceRow row;
    row.family = family.name;
    row.base = closability_probe(ctx, family);
    if (starred) row.starred = closability_probe(*starred, family);
    for (const auto& [label, c] : shifted) row.shifted.emplace_back(label, closability_probe(c, family));
    report.rows.push_back(std::move(row));
  }
  return report;
}

// --- conditions (iii), (iv) on the extension domain ---------------------------

struct IpsReport {
  std::size_t samples = 0;
  double invariance_residual = 0.0;  ///< max |Omega(X B1, B2) - Omega(B1, X* B2)|
  double degeneracy_residual = 0.0;  ///< max |Omega(X, Y)| over X with Omega(X, X) ~ 0
  std::size_t degenerate_samples = 0;

  bool ok(double tol = 1e-10) const { return invariance_residual <= tol && degeneracy_residual <= tol; }
};

template <class E>
IpsReport check_ips_conditions(const FormContext<E>& ctx, const std::vector<E>& extension_samples,
                               const std::vector<E>& ao_elements, double degeneracy_tol = 1e-14) {
  if (!ctx.multiply || !ctx.involution) {
    throw std::invalid_argument("check_ips_conditions: needs multiplication and involution");
  }
  IpsReport r;
  for (const E& x : extension_samples) {
    const E x_star = ctx.involution(x);
    for (const E& b1 : ao_elements) {
      for (const E& b2 : ao_elements) {
        const Complex lhs = ctx(ctx.multiply(x, b1), b2);
        const Complex rhs = ctx(b1, ctx.multiply(x_star, b2));
        const double scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
        r.invariance_residual = std::max(r.invariance_residual, std::abs(lhs - rhs) / scale);
      }
    }
    if (ctx.diag(x) <= degeneracy_tol) {
      ++r.degenerate_samples;
      for (const E& y : extension_samples) r.degeneracy_residual = std::max(r.degeneracy_residual, std::abs(ctx(x, y)));
      for (const E& y : ao_elements) r.degeneracy_residual = std::max(r.degeneracy_residual, std::abs(ctx(x, y)));
    }
    ++r.samples;
  }
  return r;
}

// --- limit independence -------------------------------------------------------

struct LimitComparison {
  double diag_gap = 0.0;      ///< |Omega(A_n, A_n) - Omega(B_n, B_n)| at the last index
  double cross_distance = 0.0;  ///< Omega(A_n - B_n, A_n - B_n) at the last index
  bool cross_tends_to_zero = false;
};

/// Two approximating sequences of the same limit element must give the same
/// closure value; reports the discrepancy rather than assuming it away.
template <class E>
LimitComparison compare_approximations(const FormContext<E>& ctx, const ProbeFamily<E>& a, const ProbeFamily<E>& b) {
  if (a.indices != b.indices) throw std::invalid_argument("compare_approximations: index sets differ");
  std::vector<double> cross;
  LimitComparison out;
  for (double n : a.indices) {
    const E xa = a.member(n);
    const E xb = b.member(n);
    cross.push_back(ctx.diag(ctx.subtract(xa, xb)));
    out.diag_gap = std::abs(ctx.diag(xa) - ctx.diag(xb));
  }
  out.cross_distance = cross.back();
  out.cross_tends_to_zero = sequence::tends_to_zero(a.indices, cross);
  return out;
}

}  // namespace quasistar::forms
