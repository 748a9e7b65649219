#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "fisher.hpp"
#include "harness.hpp"

namespace arcphase {

// CSV writers. Numbers use std::to_chars (shortest round-trip, '.' decimal
// point, never locale dependent), so identical results give identical bytes.

inline std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::int64_t value) { return std::to_string(value); }
inline std::string format_number(int value) { return std::to_string(value); }

namespace detail {
template <typename... Ts>
void csv_row(std::string& out, const Ts&... fields) {
  bool first = true;
  ((out += first ? "" : ",", out += format_number(fields), first = false), ...);
  out += '\n';
}
}  // namespace detail

inline std::string coverage_table_csv(const std::vector<TableCell>& cells) {
  std::string out = "r,ntot,l,trials,hits,coverage,ci_low,ci_high,hit_radius\n";
  for (const TableCell& c : cells) {
    const CoverageReport& rep = c.report;
    detail::csv_row(out, c.rate, c.shots_per_stage, c.stages, rep.trials, rep.hits, rep.coverage,
                    rep.ci_low, rep.ci_high, rep.hit_radius);
  }
  return out;
}

inline std::string coverage_report_csv(const CoverageReport& rep) {
  std::string out = "trials,hits,coverage,ci_low,ci_high,hit_radius\n";
  detail::csv_row(out, rep.trials, rep.hits, rep.coverage, rep.ci_low, rep.ci_high, rep.hit_radius);
  return out;
}

inline std::string trial_csv(const TrialResult& trial) {
  std::string out = "theta,estimate,arc_lower,arc_width,hit,circ_dist\n";
  detail::csv_row(out, trial.theta.value(), trial.estimate.value(), trial.final_arc.lower().value(),
                  trial.final_arc.width(), trial.hit ? 1 : 0, circ_dist(trial.estimate, trial.theta));
  return out;
}

inline std::string info_curve_csv(const std::vector<InfoCurvePoint>& curve) {
  std::string out = "k,m,H_per_use,Fx_avg_per_use,Fy_avg_per_use\n";
  for (const InfoCurvePoint& p : curve) {
    detail::csv_row(out, p.stage, p.uses, p.sld_per_use, p.fisher_x_per_use, p.fisher_y_per_use);
  }
  return out;
}

inline std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::string out = "l,epsilon,Ntot,n,mean_cost\n";
  for (const ScalingRow& r : rows) {
    detail::csv_row(out, r.stages, r.epsilon, r.shots_per_stage, r.channel_uses, r.mean_cost);
  }
  return out;
}

inline std::string sample_budget_csv(const SampleBudget& budget) {
  std::string out = "l,epsilon,N_per_basis,N_tot,n\n";
  detail::csv_row(out, budget.stages, budget.epsilon, budget.per_basis, budget.per_stage,
                  budget.channel_uses());
  return out;
}

}  // namespace arcphase
