// sequence.hpp: convergence analysis of finite probe sequences.
//
// Nets are replaced by sequences indexed by n_1 < n_2 < ... < n_max. A value
// sequence "tends to zero" when its last window is exactly negligible or its
// log-log slope over the last decade of n is clearly negative.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace quasistar::sequence {

inline constexpr double kSlopeMargin = 0.05;
inline constexpr double kNegligible = 1e-12;
inline constexpr std::size_t kWindow = 5;

struct PowerFit {
  double slope = 0.0;      ///< d log(value) / d log(n)
  double intercept = 0.0;  ///< log(value) at n = 1
  std::size_t points = 0;
};

/// Least-squares fit of log(value) against log(n) over samples with
/// n >= n_max / 10 and value > 0. Returns nullopt with fewer than 2 usable points.
std::optional<PowerFit> fit_last_decade(const std::vector<double>& n, const std::vector<double>& values);

/// True when the last kWindow values are all <= kNegligible * scale.
bool tail_negligible(const std::vector<double>& values, double scale = 1.0);

/// Zero-limit verdict: tail negligible, or fitted slope < -kSlopeMargin.
bool tends_to_zero(const std::vector<double>& n, const std::vector<double>& values);

/// Observed growth exponent of values under successive doublings of a
/// resolution parameter, log2(d_{k+1} / d_k) for increments d_k = v_{k+1} - v_k,
/// averaged over the last two ratios. nullopt when increments vanish.
std::optional<double> doubling_rate(const std::vector<double>& values);

}  // namespace quasistar::sequence
