#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "circle.hpp"
#include "estimate.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "refine.hpp"

namespace arcphase {

enum class ThetaSource { kUniform, kFixed, kGrid };

struct ExperimentConfig {
  int stages = 6;
  std::int64_t shots_per_stage = 30;  // N_tot, split evenly between the x and y bases
  // Optional per-stage N_tot; when non-empty it must have `stages` entries and
  // overrides shots_per_stage.
  std::vector<std::int64_t> stage_shots;
  NoiseModel noise;
  std::int64_t trials = 10'000;
  std::uint64_t seed = 0;
  ThetaSource theta_source = ThetaSource::kUniform;
  double fixed_theta = 0.0;
  unsigned threads = 0;  // 0: hardware concurrency

  std::int64_t shots_at(int stage) const {
    return stage_shots.empty() ? shots_per_stage
                               : stage_shots[static_cast<std::size_t>(stage - 1)];
  }

  void validate() const {
    if (stages < 1 || stages > 52) throw std::invalid_argument("stages must lie in [1, 52]");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (!stage_shots.empty() && stage_shots.size() != static_cast<std::size_t>(stages)) {
      throw std::invalid_argument("stage_shots needs one entry per stage");
    }
    for (int k = 1; k <= stages; ++k) {
      const std::int64_t n = shots_at(k);
      if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("shots per stage must be even and >= 2");
      }
    }
  }
};

struct TrialResult {
  Angle theta;
  Angle estimate;
  Arc final_arc{0.0, 1.0};
  bool hit = false;
  int degenerate_stages = 0;
};

/// Half-width of the final arc, 1/(2^l * 3); a hit is exactly circ_dist <= this.
inline double hit_radius(int stages) { return std::ldexp(1.0 / 3.0, -stages); }

/// Sample every stage, build its arc, fold, and score against theta.
inline TrialResult run_trial(Angle theta, const ExperimentConfig& cfg, RandomStream& rng) {
  TrialResult out;
  out.theta = theta;
  RefinementState state;
  for (int k = 1; k <= cfg.stages; ++k) {
    const StageCounts counts = sample_stage(theta, k, cfg.shots_at(k) / 2, cfg.noise, rng);
    const StageEstimate est = stage_estimate(counts);
    out.degenerate_stages += est.degenerate ? 1 : 0;
    state = k == 1 ? refine_init(est.arc) : refine_step(state, est.arc);
  }
  const RefinementResult result = refine_finish(state);
  out.estimate = result.estimate;
  out.final_arc = result.final_arc;
  out.hit = arc_contains(result.final_arc, theta);
  return out;
}

/// Runs body(i) for i in [0, count) over `threads` workers and returns the
/// results in index order, so output never depends on the thread count.
template <typename Body>
auto parallel_map(std::int64_t count, unsigned threads, Body&& body)
    -> std::vector<decltype(body(std::int64_t{}))> {
  using Result = decltype(body(std::int64_t{}));
  std::vector<Result> results(static_cast<std::size_t>(count));
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, std::max<std::int64_t>(count, 1)));

  if (workers <= 1) {
    for (std::int64_t i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = body(i);
    return results;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::int64_t begin = count * w / workers;
        const std::int64_t end = count * (w + 1) / workers;
        try {
          for (std::int64_t i = begin; i < end; ++i) results[static_cast<std::size_t>(i)] = body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

/// The stream for trial i of an experiment seeded with `seed`.
inline RandomStream trial_stream(std::uint64_t seed, std::int64_t trial) {
  return RandomStream{seed}.split(static_cast<std::uint64_t>(trial));
}

inline Angle draw_theta(const ExperimentConfig& cfg, std::int64_t trial, RandomStream& rng) {
  switch (cfg.theta_source) {
    case ThetaSource::kFixed: return Angle{cfg.fixed_theta};
    case ThetaSource::kGrid:
      return Angle{(static_cast<double>(trial) + 0.5) / static_cast<double>(cfg.trials)};
    case ThetaSource::kUniform: break;
  }
  return Angle{rng.uniform()};
}

inline std::vector<TrialResult> run_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  return parallel_map(cfg.trials, cfg.threads, [&cfg](std::int64_t i) {
    RandomStream rng = trial_stream(cfg.seed, i);
    const Angle theta = draw_theta(cfg, i, rng);
    return run_trial(theta, cfg, rng);
  });
}

/// Coverage estimate with the 95% normal-approximation interval
/// m/M +- 1.96 sqrt((m/M)(1 - m/M)/M), clamped to [0, 1].
struct CoverageReport {
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  double coverage = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double hit_radius = 0.0;
  std::int64_t degenerate_stages = 0;

  double sigma() const { return std::sqrt(coverage * (1.0 - coverage) / static_cast<double>(trials)); }
};

inline CoverageReport make_coverage_report(std::int64_t trials, std::int64_t hits, int stages) {
  if (trials < 1) throw std::invalid_argument("coverage report needs trials >= 1");
  CoverageReport rep;
  rep.trials = trials;
  rep.hits = hits;
  rep.coverage = static_cast<double>(hits) / static_cast<double>(trials);
  const double half = 1.96 * rep.sigma();
  rep.ci_low = std::max(0.0, rep.coverage - half);
  rep.ci_high = std::min(1.0, rep.coverage + half);
  rep.hit_radius = hit_radius(stages);
  return rep;
}

inline CoverageReport coverage_experiment(const ExperimentConfig& cfg) {
  const std::vector<TrialResult> results = run_trials(cfg);
  std::int64_t hits = 0, degenerate = 0;
  for (const TrialResult& r : results) {
    hits += r.hit ? 1 : 0;
    degenerate += r.degenerate_stages;
  }
  CoverageReport rep = make_coverage_report(cfg.trials, hits, cfg.stages);
  rep.degenerate_stages = degenerate;
  return rep;
}

struct TableCell {
  double rate = 0.0;
  int stages = 0;
  std::int64_t shots_per_stage = 0;
  CoverageReport report;
};

/// Seed for one table cell, derived from its parameters so a cell reproduces
/// regardless of which other cells share the table.
inline std::uint64_t cell_seed(std::uint64_t seed, double rate, int stages, std::int64_t shots) {
  using detail::mix64;
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ std::bit_cast<std::uint64_t>(rate));
  h = mix64(h ^ static_cast<std::uint64_t>(stages));
  return mix64(h ^ static_cast<std::uint64_t>(shots));
}

struct TableSpec {
  std::vector<double> rates;
  std::vector<int> stages;
  std::vector<std::int64_t> shots;
  std::int64_t trials = 10'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Coverage over the full (rate x shots x stages) grid, row-major in that order.
inline std::vector<TableCell> coverage_table(const TableSpec& spec) {
  std::vector<TableCell> cells;
  for (double r : spec.rates) {
    for (std::int64_t n : spec.shots) {
      for (int l : spec.stages) {
        ExperimentConfig cfg;
        cfg.stages = l;
        cfg.shots_per_stage = n;
        cfg.noise = NoiseModel{r};
        cfg.trials = spec.trials;
        cfg.seed = cell_seed(spec.seed, r, l, n);
        cfg.threads = spec.threads;
        cells.push_back({r, l, n, coverage_experiment(cfg)});
      }
    }
  }
  return cells;
}

/// Noiseless grid N_tot in {20, 30, 40, 50}, l in {6..9}.
inline TableSpec table1_spec(std::int64_t trials, std::uint64_t seed, unsigned threads = 0) {
  return TableSpec{{0.0}, {6, 7, 8, 9}, {20, 30, 40, 50}, trials, seed, threads};
}

/// Depolarizing grid r in {2^-4..2^-8}, l in {4..9}, N_tot = 30.
inline TableSpec table2_spec(std::int64_t trials, std::uint64_t seed, unsigned threads = 0) {
  return TableSpec{{0x1p-4, 0x1p-5, 0x1p-6, 0x1p-7, 0x1p-8}, {4, 5, 6, 7, 8, 9}, {30}, trials, seed,
                   threads};
}

inline std::vector<TableCell> noisy_table(const std::vector<double>& rates,
                                          const std::vector<int>& stages, std::int64_t shots,
                                          std::int64_t trials, std::uint64_t seed,
                                          unsigned threads = 0) {
  return coverage_table(TableSpec{rates, stages, {shots}, trials, seed, threads});
}

/// 1 - |tr(U_est^-1 U)|^2 / 4 for the diagonal phase unitary: sin^2(pi (est - theta)).
inline double fidelity_cost(Angle estimate, Angle theta) {
  const double s = std::sin(std::numbers::pi * circ_dist(estimate, theta));
  return s * s;
}

struct ScalingRow {
  int stages = 0;
  double epsilon = 0.0;
  std::int64_t shots_per_stage = 0;
  std::int64_t channel_uses = 0;
  double mean_cost = 0.0;
  double coverage = 0.0;
};

struct ScalingSpec {
  int min_stages = 3;
  int max_stages = 8;
  std::int64_t trials = 2'000;
  std::uint64_t seed = 0;
  NoiseModel noise;
  unsigned threads = 0;
};

/// For each l: epsilon = 2^{-2l}, N_tot from the Hoeffding budget, n = N_tot (2^l - 1),
/// and the mean fidelity cost over uniformly random theta.
inline std::vector<ScalingRow> scaling_experiment(const ScalingSpec& spec) {
  if (spec.min_stages < 1 || spec.max_stages < spec.min_stages) {
    throw std::invalid_argument("scaling_experiment: bad stage range");
  }
  std::vector<ScalingRow> rows;
  for (int l = spec.min_stages; l <= spec.max_stages; ++l) {
    const SampleBudget budget = sample_budget(l, heisenberg_epsilon(l));
    ExperimentConfig cfg;
    cfg.stages = l;
    cfg.shots_per_stage = budget.per_stage;
    cfg.noise = spec.noise;
    cfg.trials = spec.trials;
    cfg.seed = cell_seed(spec.seed, spec.noise.rate(), l, budget.per_stage);
    cfg.threads = spec.threads;

    const std::vector<TrialResult> results = run_trials(cfg);
    double cost = 0.0;
    std::int64_t hits = 0;
    for (const TrialResult& r : results) {
      cost += fidelity_cost(r.estimate, r.theta);
      hits += r.hit ? 1 : 0;
    }
    const double m = static_cast<double>(spec.trials);
    rows.push_back({l, budget.epsilon, budget.per_stage, budget.channel_uses(), cost / m,
                    static_cast<double>(hits) / m});
  }
  return rows;
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two paired points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Slope of log(mean_cost / (ln n)^2) against log n; -2 is the Heisenberg rate
/// up to the logarithmic factor.
inline double reduced_scaling_slope(const std::vector<ScalingRow>& rows) {
  std::vector<double> xs, ys;
  for (const ScalingRow& row : rows) {
    const double n = static_cast<double>(row.channel_uses);
    const double log_n = std::log(n);
    xs.push_back(n);
    ys.push_back(row.mean_cost / (log_n * log_n));
  }
  return loglog_slope(xs, ys);
}

}  // namespace arcphase
