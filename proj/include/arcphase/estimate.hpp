#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "circle.hpp"
#include "measure.hpp"

namespace arcphase {

/// Per-basis deviation |N_1/N - p| under which the stage arc is guaranteed to
/// cover the true phase. Equals 0.612/2: the angular bound needs |x - x0| <= 0.612
/// on the cosine scale, and x = 2p - 1.
inline constexpr double kProbabilityTolerance = 0.306;

/// 1 / (2 * 0.306^2) = 5.3398..., rounded up.
inline constexpr double kShotsPerLog = 5.34;

inline constexpr double kStageArcWidth = 1.0 / 3.0;

struct StageEstimate {
  Angle phase;   // estimate of (2^{k-1} theta) mod 1
  Arc arc;       // width-1/3 arc centred on phase
  bool degenerate = false;  // empirical vector was exactly (0, 0)
};

/// Point estimate via atan2 of the empirical cosine and sine, and the
/// width-1/3 arc centred on it. A zero empirical vector yields phase 0 with
/// `degenerate` set.
inline StageEstimate stage_estimate(const StageCounts& counts) {
  if (counts.shots < 1) {
    throw std::invalid_argument("stage_estimate: no shots");
  }
  const double n = static_cast<double>(counts.shots);
  const double cos_hat = 2.0 * static_cast<double>(counts.x_ones) / n - 1.0;
  const double sin_hat = 2.0 * static_cast<double>(counts.y_ones) / n - 1.0;
  const bool degenerate = cos_hat == 0.0 && sin_hat == 0.0;
  const Angle phase{degenerate ? 0.0 : std::atan2(sin_hat, cos_hat) / (2.0 * std::numbers::pi)};
  return StageEstimate{phase, Arc{phase - kStageArcWidth / 2, kStageArcWidth}, degenerate};
}

inline Arc stage_arc(const StageCounts& counts) { return stage_estimate(counts).arc; }

/// Worst-case angular error (radians) of atan2(y0, x0) when both coordinates
/// are off by at most alpha: arcsin(sqrt(2) alpha).
inline double angular_error_bound(double alpha) {
  constexpr double max_alpha = 0.70710678118654757;  // 1/sqrt(2), rounded up
  if (!(alpha >= 0.0) || alpha > max_alpha) {
    throw std::domain_error("angular_error_bound: alpha outside [0, 1/sqrt(2)]");
  }
  return std::asin(std::min(1.0, std::numbers::sqrt2 * alpha));
}

struct SampleBudget {
  int stages = 1;
  double epsilon = 0.5;
  std::int64_t per_basis = 0;
  std::int64_t per_stage = 0;  // both bases

  /// Total channel uses over all stages: per_stage * (2^l - 1).
  std::int64_t channel_uses() const {
    return per_stage * ((std::int64_t{1} << stages) - 1);
  }
};

/// Hoeffding-sized shot count so that each stage arc covers with probability
/// at least 1 - epsilon/l: N = ceil(5.34 ln(4l/epsilon)) per basis.
inline SampleBudget sample_budget(int stages, double epsilon) {
  if (stages < 1 || stages > 62) {
    throw std::invalid_argument("sample_budget: stages must lie in [1, 62]");
  }
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("sample_budget: epsilon must lie in (0, 1)");
  }
  const auto per_basis = static_cast<std::int64_t>(
      std::ceil(kShotsPerLog * std::log(4.0 * stages / epsilon)));
  return SampleBudget{stages, epsilon, per_basis, 2 * per_basis};
}

/// Default error rate 2^{-2l}, which puts the expected fidelity cost at O(4^{-l}).
inline double heisenberg_epsilon(int stages) { return std::ldexp(1.0, -2 * stages); }

/// True when N shots per basis push the two-sided Hoeffding tail at 0.306 below
/// 1 - sqrt(1 - epsilon/l), the per-basis requirement.
inline bool coverage_guarantee_check(int stages, double epsilon, std::int64_t shots) {
  const double tail =
      2.0 * std::exp(-2.0 * static_cast<double>(shots) * kProbabilityTolerance * kProbabilityTolerance);
  // 1 - sqrt(1 - x) without cancellation for tiny x
  const double x = epsilon / stages;
  return tail <= x / (1.0 + std::sqrt(1.0 - x));
}

}  // namespace arcphase
