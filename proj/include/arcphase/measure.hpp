#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "circle.hpp"
#include "random.hpp"

namespace arcphase {

/// Depolarizing noise applied once per channel use.
class NoiseModel {
 public:
  constexpr NoiseModel() = default;
  explicit NoiseModel(double rate) : rate_{rate} {
    if (!(rate >= 0.0) || rate >= 1.0) {
      throw std::invalid_argument("noise rate must lie in [0, 1)");
    }
  }

  static NoiseModel noiseless() { return NoiseModel{}; }

  double rate() const { return rate_; }
  /// Contraction (1-r)^m of the Bloch vector after m uses.
  double contraction(std::int64_t uses) const {
    return std::pow(1.0 - rate_, static_cast<double>(uses));
  }

 private:
  double rate_ = 0.0;
};

/// Outcome tallies from one iterative stage: N shots in each of the x and y bases.
struct StageCounts {
  int stage = 1;
  std::int64_t uses = 1;  // 2^{stage-1} channel applications per preparation
  std::int64_t shots = 0;
  std::int64_t x_ones = 0;
  std::int64_t y_ones = 0;
};

inline std::int64_t uses_at_stage(int stage) {
  if (stage < 1 || stage > 62) {
    throw std::invalid_argument("stage must lie in [1, 62]");
  }
  return std::int64_t{1} << (stage - 1);
}

namespace detail {
// 2*pi*(m theta mod 1); exact multiplication when m is a power of two.
inline double scaled_phase(Angle theta, std::int64_t uses) {
  return 2.0 * std::numbers::pi * mod1(static_cast<double>(uses) * theta.value());
}
}  // namespace detail

/// Probability of outcome 1 when measuring in x after `uses` channel applications.
inline double prob_x(Angle theta, std::int64_t uses, NoiseModel noise = {}) {
  return 0.5 * (1.0 + noise.contraction(uses) * std::cos(detail::scaled_phase(theta, uses)));
}

inline double prob_y(Angle theta, std::int64_t uses, NoiseModel noise = {}) {
  return 0.5 * (1.0 + noise.contraction(uses) * std::sin(detail::scaled_phase(theta, uses)));
}

/// Draws both bases' binomial tallies for stage `stage`, x first then y.
inline StageCounts sample_stage(Angle theta, int stage, std::int64_t shots,
                                NoiseModel noise, RandomStream& rng) {
  if (shots < 1) {
    throw std::invalid_argument("sample_stage: need at least one shot per basis");
  }
  const std::int64_t uses = uses_at_stage(stage);
  StageCounts counts{stage, uses, shots, 0, 0};
  counts.x_ones = rng.binomial(shots, prob_x(theta, uses, noise));
  counts.y_ones = rng.binomial(shots, prob_y(theta, uses, noise));
  return counts;
}

}  // namespace arcphase
