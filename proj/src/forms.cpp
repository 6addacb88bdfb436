#include "quasistar/forms.hpp"

#include <iomanip>

namespace quasistar::forms {

SequenceVerdict analyze_probe(std::string family, std::vector<ProbeRow> rows) {
  SequenceVerdict v;
  v.family = std::move(family);
  std::vector<double> n, tau, diag, pair_n, pair;
  double diag_scale = 0.0;
  for (const auto& r : rows) {
    n.push_back(r.n);
    tau.push_back(r.tau_norm);
    diag.push_back(r.omega_diag);
    diag_scale = std::max(diag_scale, std::abs(r.omega_diag));
    if (!std::isnan(r.omega_pairwise)) {
      pair_n.push_back(r.n);
      pair.push_back(std::max(0.0, r.omega_pairwise));
    }
  }
  if (auto f = sequence::fit_last_decade(n, tau)) v.rates.tau = f->slope;
  if (auto f = sequence::fit_last_decade(n, diag)) v.rates.omega_diag = f->slope;
  if (!pair.empty()) {
    if (auto f = sequence::fit_last_decade(pair_n, pair)) v.rates.omega_pairwise = f->slope;
  }

  v.tau_null = sequence::tends_to_zero(n, tau);

  bool pair_small = pair.size() >= sequence::kWindow;
  for (std::size_t i = pair.size() >= sequence::kWindow ? pair.size() - sequence::kWindow : 0; i < pair.size(); ++i) {
    pair_small = pair_small && pair[i] <= kCauchyThreshold * std::max(1.0, diag_scale);
  }
  v.omega_cauchy = pair_small || (v.rates.omega_pairwise && *v.rates.omega_pairwise < -sequence::kSlopeMargin) ||
                   sequence::tail_negligible(pair, std::max(1.0, diag_scale));

  if (v.omega_cauchy) {
    v.omega_limit = sequence::tends_to_zero(n, diag) ? 0.0 : std::max(0.0, diag.back());
  }
  v.table = std::move(rows);
  return v;
}

nlohmann::json to_json(const SequenceVerdict& v) {
  nlohmann::json j{{"family", v.family},
                   {"tau_null", v.tau_null},
                   {"omega_cauchy", v.omega_cauchy},
                   {"counterexample", v.counterexample()}};
  j["omega_limit"] = v.omega_limit ? nlohmann::json(*v.omega_limit) : nlohmann::json(nullptr);
  auto opt = [](const std::optional<double>& x) { return x ? nlohmann::json(*x) : nlohmann::json(nullptr); };
  j["rates"] = {{"tau", opt(v.rates.tau)},
                {"omega_diag", opt(v.rates.omega_diag)},
                {"omega_pairwise", opt(v.rates.omega_pairwise)}};
  return j;
}

std::string to_csv(const SequenceVerdict& v) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "n,tau_norm,omega_diag,omega_pairwise\n";
  for (const auto& r : v.table) {
    out << r.n << ',' << r.tau_norm << ',' << r.omega_diag << ',';
    if (!std::isnan(r.omega_pairwise)) out << r.omega_pairwise;
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const EquivalenceReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json shifted = nlohmann::json::object();
    for (const auto& [label, v] : row.shifted) shifted[label] = v.counterexample();
    rows.push_back({{"family", row.family},
                    {"omega", to_json(row.base)},
                    {"omega_star_counterexample",
                     row.starred ? nlohmann::json(row.starred->counterexample()) : nlohmann::json(nullptr)},
                    {"omega_b_counterexample", std::move(shifted)},
                    {"agree", row.agree()}});
  }
  return {{"context", r.context}, {"all_agree", r.all_agree()}, {"counterexamples", r.counterexamples()},
          {"rows", std::move(rows)}};
}

FormContext<algebra::AlgebraElement> form_from_state(const algebra::StarAlgebra& algebra,
                                                     const algebra::State& omega) {
  using algebra::AlgebraElement;
  FormContext<AlgebraElement> ctx;
  ctx.name = "state_form";
  ctx.ambient_norm = [](const AlgebraElement& a) { return a.coeffs().norm(); };
  ctx.form = [algebra, omega](const AlgebraElement& a, const AlgebraElement& b) {
    return omega(algebra.multiply(algebra.star(b), a));
  };
  ctx.subtract = [](const AlgebraElement& a, const AlgebraElement& b) { return a - b; };
  ctx.involution = [algebra](const AlgebraElement& a) { return algebra.star(a); };
  ctx.multiply = [algebra](const AlgebraElement& a, const AlgebraElement& b) { return algebra.multiply(a, b); };
  if (algebra.has_unit()) ctx.unit = algebra.unit();
  return ctx;
}

}  // namespace quasistar::forms
