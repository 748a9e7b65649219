#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "circle.hpp"
#include "measure.hpp"

namespace arcphase {

// Fisher information of the x and y two-outcome measurements after m uses of
// the depolarizing phase channel, and the SLD quantum information bounding both.

namespace detail {
inline double noiseless_info(std::int64_t uses) {
  const double m = static_cast<double>(uses);
  return 4.0 * std::numbers::pi * std::numbers::pi * m * m;
}

// info * a * num_trig^2 / (1 - a * den_trig^2), a = (1-r)^{2m}
inline double binary_fisher(std::int64_t uses, double rate, double num_trig, double den_trig) {
  if (rate == 0.0) return noiseless_info(uses);
  const double num_sq = num_trig * num_trig;
  if (num_sq == 0.0) return 0.0;
  const double a = std::pow(1.0 - rate, 2.0 * static_cast<double>(uses));
  return noiseless_info(uses) * a * num_sq / (1.0 - a * den_trig * den_trig);
}

inline void check_rate(double rate) {
  if (!(rate >= 0.0) || rate >= 1.0) throw std::invalid_argument("noise rate must lie in [0, 1)");
}
}  // namespace detail

/// At r = 0 this is the 0/0-free limit 4 pi^2 m^2 for every theta.
inline double fisher_x(Angle theta, std::int64_t uses, double rate) {
  detail::check_rate(rate);
  const double phase = detail::scaled_phase(theta, uses);
  return detail::binary_fisher(uses, rate, std::sin(phase), std::cos(phase));
}

inline double fisher_y(Angle theta, std::int64_t uses, double rate) {
  detail::check_rate(rate);
  const double phase = detail::scaled_phase(theta, uses);
  return detail::binary_fisher(uses, rate, std::cos(phase), std::sin(phase));
}

/// SLD quantum information 4 pi^2 m^2 (1-r)^{2m}; independent of theta.
inline double sld_info(std::int64_t uses, double rate) {
  detail::check_rate(rate);
  return detail::noiseless_info(uses) * std::pow(1.0 - rate, 2.0 * static_cast<double>(uses));
}

struct InfoPoint {
  std::int64_t uses = 1;
  Angle theta;
  double rate = 0.0;
  double fisher_x = 0.0;
  double fisher_y = 0.0;
  double sld = 0.0;
  double sld_per_use = 0.0;
};

inline InfoPoint info_point(Angle theta, std::int64_t uses, double rate) {
  const double h = sld_info(uses, rate);
  return InfoPoint{uses, theta, rate, fisher_x(theta, uses, rate), fisher_y(theta, uses, rate), h,
                   h / static_cast<double>(uses)};
}

struct StoppingPoint {
  double uses_exact = 0.0;    // -1 / (2 ln(1-r)), maximiser of H/m over real m
  double uses_small_r = 0.0;  // 1 / (2r)
  double stages = 0.0;        // -log2 r
};

inline StoppingPoint optimal_uses(double rate) {
  if (!(rate > 0.0) || rate >= 1.0) {
    throw std::invalid_argument("optimal_uses: rate must lie in (0, 1)");
  }
  return StoppingPoint{-1.0 / (2.0 * std::log1p(-rate)), 1.0 / (2.0 * rate), -std::log2(rate)};
}

struct InfoCurvePoint {
  int stage = 1;
  std::int64_t uses = 1;
  double sld_per_use = 0.0;
  double fisher_x_per_use = 0.0;  // averaged over theta
  double fisher_y_per_use = 0.0;
};

/// Per-use information at stages 1..max_stage (m = 2^{k-1}). The x and y Fisher
/// curves are averaged over a uniform midpoint grid of `theta_grid` angles.
inline std::vector<InfoCurvePoint> info_curve(double rate, int max_stage, int theta_grid = 1024) {
  if (max_stage < 1) throw std::invalid_argument("info_curve: max_stage must be >= 1");
  if (theta_grid < 1) throw std::invalid_argument("info_curve: empty theta grid");
  detail::check_rate(rate);

  std::vector<InfoCurvePoint> curve;
  curve.reserve(static_cast<std::size_t>(max_stage));
  for (int k = 1; k <= max_stage; ++k) {
    const std::int64_t m = uses_at_stage(k);
    double fx = 0.0, fy = 0.0;
    for (int i = 0; i < theta_grid; ++i) {
      const Angle theta{(i + 0.5) / theta_grid};
      fx += fisher_x(theta, m, rate);
      fy += fisher_y(theta, m, rate);
    }
    const double per = static_cast<double>(m) * theta_grid;
    curve.push_back({k, m, sld_info(m, rate) / static_cast<double>(m), fx / per, fy / per});
  }
  return curve;
}

}  // namespace arcphase
