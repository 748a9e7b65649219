#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace arcphase {

namespace detail {

// SplitMix64 finalizer, used only to derive well-separated engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seedable, splittable random stream. A stream is identified by a 64-bit key;
/// split(i) derives an independent child keyed on (key, i), so a trial's
/// randomness depends only on its index and never on scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_{detail::mix64(seed)}, engine_{key_} {}

  RandomStream split(std::uint64_t index) const {
    return RandomStream{key_, detail::mix64(key_ ^ detail::mix64(index + 1))};
  }

  std::uint64_t key() const { return key_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exact Binomial(n, p) draw.
  std::int64_t binomial(std::int64_t n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n <= kBernoulliLimit) {
      std::int64_t hits = 0;
      for (std::int64_t i = 0; i < n; ++i) hits += bernoulli(p) ? 1 : 0;
      return hits;
    }
    return binomial_inversion(n, p);
  }

  static constexpr std::int64_t kBernoulliLimit = 64;

 private:
  RandomStream(std::uint64_t /*parent*/, std::uint64_t child_key)
      : key_{child_key}, engine_{child_key} {}

  // Inversion over the support enumerated outward from the mode
  // (mode, mode+1, mode-1, mode+2, ...). Any fixed enumeration order gives an
  // exact sample; starting at the mode keeps the search O(sqrt(n p q)).
  std::int64_t binomial_inversion(std::int64_t n, double p) {
    const double q = 1.0 - p;
    const auto mode = static_cast<std::int64_t>(std::floor((n + 1) * p));
    const std::int64_t top = mode > n ? n : mode;
    const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(top + 1.0) -
                                std::lgamma(static_cast<double>(n - top) + 1.0) +
                                top * std::log(p) + (n - top) * std::log(q);
    const double pmf_mode = std::exp(log_pmf_mode);
    const double ratio = p / q;

    double u = uniform();
    u -= pmf_mode;
    if (u < 0.0) return top;

    std::int64_t hi = top, lo = top;
    double pmf_hi = pmf_mode, pmf_lo = pmf_mode;
    for (;;) {
      const bool can_up = hi < n && pmf_hi > 0.0;
      const bool can_down = lo > 0 && pmf_lo > 0.0;
      if (!can_up && !can_down) return top;  // leftover rounding mass
      if (can_up) {
        pmf_hi *= ratio * static_cast<double>(n - hi) / static_cast<double>(hi + 1);
        ++hi;
        u -= pmf_hi;
        if (u < 0.0) return hi;
      }
      if (can_down) {
        pmf_lo *= static_cast<double>(lo) / (ratio * static_cast<double>(n - lo + 1));
        --lo;
        u -= pmf_lo;
        if (u < 0.0) return lo;
      }
    }
  }

  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace arcphase
