#include "quasistar/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace quasistar::sequence {

std::optional<PowerFit> fit_last_decade(const std::vector<double>& n, const std::vector<double>& values) {
  if (n.size() != values.size()) throw std::invalid_argument("fit_last_decade: size mismatch");
  if (n.empty()) return std::nullopt;
  const double n_max = *std::max_element(n.begin(), n.end());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < n_max / 10.0 || !(values[i] > 0.0) || !std::isfinite(values[i])) continue;
    const double x = std::log(n[i]);
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double denom = static_cast<double>(m) * sxx - sx * sx;
  if (denom <= 0.0) return std::nullopt;
  PowerFit fit;
  fit.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / static_cast<double>(m);
  fit.points = m;
  return fit;
}

bool tail_negligible(const std::vector<double>& values, double scale) {
  if (values.empty()) return false;
  const std::size_t start = values.size() > kWindow ? values.size() - kWindow : 0;
  for (std::size_t i = start; i < values.size(); ++i) {
    if (!(std::abs(values[i]) <= kNegligible * scale)) return false;
  }
  return true;
}

bool tends_to_zero(const std::vector<double>& n, const std::vector<double>& values) {
  if (tail_negligible(values)) return true;
  const auto fit = fit_last_decade(n, values);
  return fit && fit->slope < -kSlopeMargin;
}

std::optional<double> doubling_rate(const std::vector<double>& values) {
  if (values.size() < 3) throw std::invalid_argument("doubling_rate: need at least 3 refinement levels");
  std::vector<double> inc;
  for (std::size_t i = 1; i < values.size(); ++i) inc.push_back(values[i] - values[i - 1]);
  const double scale = std::max(1e-300, std::abs(values.back()));
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = inc.size() >= 3 ? inc.size() - 3 : 0; i + 1 < inc.size(); ++i) {
    const double a = std::abs(inc[i]);
    const double b = std::abs(inc[i + 1]);
    if (a <= 1e-14 * scale && b <= 1e-14 * scale) continue;
    if (a <= 1e-300) return std::numeric_limits<double>::infinity();
    sum += std::log2(std::max(b, 1e-300) / a);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

}  // namespace quasistar::sequence
