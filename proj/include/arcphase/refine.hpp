#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "circle.hpp"

namespace arcphase {

// Combines per-stage confidence arcs L_1..L_l, where L_k covers
// (2^{k-1} theta) mod 1, into one arc for theta of width w / 2^{l-1}.
//
// The running lower bound z(k) of J_k (an arc for the unreduced 2^{k-1} theta)
// doubles every stage, so it is never stored directly. Only z(k) mod 1 is
// needed to classify the next arc, and z(l) / 2^{l-1} telescopes to
// z(1) + sum_k offset_k / 2^k, which stays bounded.

inline constexpr double kThird = 1.0 / 3.0;
inline constexpr double kTwoThirds = 2.0 / 3.0;

/// Which way the next stage arc was folded into the doubled running arc.
enum class RefineCase {
  kInside,   // L_{k+1} starts inside 2J_k: follow it
  kTrailing, // L_{k+1} ends inside 2J_k: keep the lower end of 2J_k
  kLeading,  // L_{k+1} starts in the upper part of 2J_k: shift by 1/3
};

struct RefinementState {
  int stage = 1;
  double frac_lower = 0.0;      // z(k) mod 1
  double accum_estimate = 0.0;  // z(k) / 2^{k-1}
  double width = kThird;

  /// J_k reduced onto the circle.
  Arc current_arc() const { return Arc{Angle{frac_lower}, width}; }
};

struct RefinementResult {
  Angle estimate;
  Arc final_arc;
};

inline RefineCase classify_offset(double delta) {
  if (delta < kThird) return RefineCase::kInside;
  if (delta < kTwoThirds) return RefineCase::kLeading;
  return RefineCase::kTrailing;
}

inline RefinementState refine_init(const Arc& first) {
  if (first.width() > kThird) {
    throw std::invalid_argument("refine_init: stage arc wider than 1/3");
  }
  const double lower = first.lower().value();
  return RefinementState{1, lower, lower, first.width()};
}

inline RefinementState refine_step(const RefinementState& state, const Arc& next) {
  if (std::abs(next.width() - state.width) > 1e-12) {
    throw std::invalid_argument("refine_step: stage arc width mismatch");
  }
  const double doubled = 2.0 * state.frac_lower;
  const double delta = mod1(next.lower().value() - doubled);

  double offset = 0.0;
  switch (classify_offset(delta)) {
    case RefineCase::kInside: offset = delta; break;
    case RefineCase::kLeading: offset = kThird; break;
    case RefineCase::kTrailing: offset = 0.0; break;
  }

  RefinementState out = state;
  out.accum_estimate += std::ldexp(offset, -state.stage);
  out.frac_lower = mod1(doubled + offset);
  out.stage = state.stage + 1;
  return out;
}

inline RefinementResult refine_finish(const RefinementState& state) {
  const double scaled_width = std::ldexp(state.width, -(state.stage - 1));
  return RefinementResult{Angle{state.accum_estimate + scaled_width / 2},
                          Arc{Angle{state.accum_estimate}, scaled_width}};
}

/// Folds a whole sequence of stage arcs. `arcs` must be non-empty.
inline RefinementResult refine_arcs(std::span<const Arc> arcs) {
  if (arcs.empty()) {
    throw std::invalid_argument("refine_arcs: no stage arcs");
  }
  RefinementState state = refine_init(arcs.front());
  for (const Arc& arc : arcs.subspan(1)) {
    state = refine_step(state, arc);
  }
  return refine_finish(state);
}

}  // namespace arcphase
