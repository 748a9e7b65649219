#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arcphase {

/// Reduces a real number to [0, 1).
inline double mod1(double value) {
  double r = value - std::floor(value);
  // value - floor(value) rounds up to 1.0 for tiny negative inputs
  return r >= 1.0 ? 0.0 : r;
}

/// A point on the circle of unit circumference. Always stored reduced mod 1,
/// so Angle(1.25) and Angle(0.25) compare equal.
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double value) : value_{mod1(value)} {}

  double value() const { return value_; }

  friend Angle operator+(Angle a, double shift) { return Angle{a.value_ + shift}; }
  friend Angle operator-(Angle a, double shift) { return Angle{a.value_ - shift}; }
  friend bool operator==(Angle, Angle) = default;

 private:
  double value_ = 0.0;
};

/// Half-open directed arc [lower, lower + width) taken mod 1.
class Arc {
 public:
  Arc(Angle lower, double width) : lower_{lower}, width_{width} {
    if (!(width > 0.0) || width > 1.0) {
      throw std::invalid_argument("arc width must lie in (0, 1]");
    }
  }
  Arc(double lower, double width) : Arc(Angle{lower}, width) {}

  Angle lower() const { return lower_; }
  double width() const { return width_; }
  /// Upper endpoint, reduced mod 1.
  Angle upper() const { return lower_ + width_; }
  Angle midpoint() const { return lower_ + width_ / 2; }

  friend bool operator==(const Arc&, const Arc&) = default;

 private:
  Angle lower_;
  double width_;
};

/// Circular distance min((a-b) mod 1, (b-a) mod 1), in [0, 1/2].
inline double circ_dist(Angle a, Angle b) {
  return std::min(mod1(a.value() - b.value()), mod1(b.value() - a.value()));
}

inline bool arc_contains(const Arc& arc, Angle t) {
  return mod1(t.value() - arc.lower().value()) < arc.width();
}

/// True when `inner` lies entirely inside `outer` on the circle.
inline bool arc_subset(const Arc& inner, const Arc& outer) {
  return mod1(inner.lower().value() - outer.lower().value()) + inner.width() <=
         outer.width();
}

/// Image of an arc under t -> 2t mod 1. Needs width <= 1/2 so the image is
/// still a single arc.
inline Arc arc_double(const Arc& arc) {
  if (arc.width() > 0.5) {
    throw std::domain_error("arc_double: width exceeds 1/2");
  }
  return Arc{Angle{2.0 * arc.lower().value()}, 2.0 * arc.width()};
}

}  // namespace arcphase
