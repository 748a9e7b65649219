#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "arcphase/refine.hpp"

using namespace arcphase;

namespace {

// arc_subset with slack for sums like 1/3 + 1/3 landing one ulp above 2/3
bool subset_within(const Arc& inner, const Arc& outer, double slack = 1e-12) {
  return mod1(inner.lower().value() - outer.lower().value()) + inner.width() <=
         outer.width() + slack;
}

// Stage arcs of width `width` placed so L_k covers (2^{k-1} theta) mod 1, the
// target sitting a fraction where[k] of the way up from the lower end.
std::vector<Arc> covering_arcs(double theta, double width, const std::vector<double>& where) {
  std::vector<Arc> arcs;
  for (std::size_t k = 0; k < where.size(); ++k) {
    const double target = mod1(std::ldexp(theta, static_cast<int>(k)));
    arcs.emplace_back(target - where[k] * width, width);
  }
  return arcs;
}

}  // namespace

TEST(Refine, WorkedExampleStepByStep) {
  RefinementState s = refine_init(Arc{0.6, 0.3});
  EXPECT_EQ(s.stage, 1);
  EXPECT_DOUBLE_EQ(s.frac_lower, 0.6);

  s = refine_step(s, Arc{0.3, 0.3});  // J2 = [1.3, 1.6]
  EXPECT_EQ(s.stage, 2);
  EXPECT_NEAR(s.frac_lower, 0.3, 1e-12);
  EXPECT_NEAR(s.accum_estimate, 1.3 / 2, 1e-12);

  s = refine_step(s, Arc{0.8, 0.3});  // J3 = [2.8, 3.1]
  EXPECT_EQ(s.stage, 3);
  EXPECT_NEAR(s.frac_lower, 0.8, 1e-12);
  EXPECT_NEAR(s.accum_estimate, 2.8 / 4, 1e-12);

  const RefinementResult r = refine_finish(s);
  EXPECT_NEAR(r.final_arc.lower().value(), 0.7, 1e-12);
  EXPECT_NEAR(r.final_arc.upper().value(), 0.775, 1e-12);
  EXPECT_EQ(r.final_arc.width(), 0.3 / 4);
  EXPECT_NEAR(r.estimate.value(), 0.7375, 1e-12);
}

TEST(Refine, InitExamples) {
  EXPECT_EQ(refine_init(Arc{0.0, 1.0 / 3}).frac_lower, 0.0);
  EXPECT_DOUBLE_EQ(refine_init(Arc{0.95, 0.3}).frac_lower, 0.95);
  EXPECT_DOUBLE_EQ(refine_init(Arc{0.95, 0.3}).accum_estimate, 0.95);
  EXPECT_THROW(refine_init(Arc{0.0, 0.4}), std::invalid_argument);
}

TEST(Refine, TrailingCaseKeepsDoubledLowerEnd) {
  const RefinementState s = refine_init(Arc{0.0, 1.0 / 3});
  const RefinementState next = refine_step(s, Arc{0.9, 1.0 / 3});
  EXPECT_EQ(next.frac_lower, 0.0);
  EXPECT_EQ(next.accum_estimate, 0.0);
}

TEST(Refine, LeadingCaseShiftsByOneThird) {
  const RefinementState s = refine_init(Arc{0.1, 1.0 / 3});
  const RefinementState next = refine_step(s, Arc{0.7, 1.0 / 3});  // delta = 0.5
  EXPECT_NEAR(next.frac_lower, 0.2 + 1.0 / 3, 1e-15);
  EXPECT_NEAR(next.accum_estimate, 0.1 + 1.0 / 6, 1e-15);
}

TEST(Refine, RejectsWidthMismatch) {
  const RefinementState s = refine_init(Arc{0.1, 1.0 / 3});
  EXPECT_THROW(refine_step(s, Arc{0.5, 0.3}), std::invalid_argument);
}

TEST(Refine, SingleStage) {
  const RefinementResult r = refine_finish(refine_init(Arc{0.0, 1.0 / 3}));
  EXPECT_EQ(r.final_arc.lower().value(), 0.0);
  EXPECT_EQ(r.final_arc.width(), 1.0 / 3);
  EXPECT_DOUBLE_EQ(r.estimate.value(), 1.0 / 6);
}

TEST(Refine, CasesPartitionTheCircle) {
  EXPECT_EQ(classify_offset(0.0), RefineCase::kInside);
  EXPECT_EQ(classify_offset(std::nextafter(kThird, 0.0)), RefineCase::kInside);
  EXPECT_EQ(classify_offset(kThird), RefineCase::kLeading);
  EXPECT_EQ(classify_offset(std::nextafter(kTwoThirds, 0.0)), RefineCase::kLeading);
  EXPECT_EQ(classify_offset(kTwoThirds), RefineCase::kTrailing);
  EXPECT_EQ(classify_offset(std::nextafter(1.0, 0.0)), RefineCase::kTrailing);
}

TEST(Refine, RefineArcsRejectsEmpty) {
  EXPECT_THROW(refine_arcs({}), std::invalid_argument);
}

// Exhaustive over a fine theta grid: centred exact stage arcs always produce a
// final arc containing theta, with the midpoint within 1/(2^l * 3).
TEST(Refine, SoundOnCentredArcs) {
  constexpr int grid = 4000;
  for (int l = 1; l <= 10; ++l) {
    const std::vector<double> centred(static_cast<std::size_t>(l), 0.5);
    const double radius = std::ldexp(1.0 / 3.0, -l);
    for (int i = 0; i < grid; ++i) {
      const double theta = (i + 0.37) / grid;
      const auto arcs = covering_arcs(theta, kThird, centred);
      const RefinementResult r = refine_arcs(arcs);
      ASSERT_LE(circ_dist(r.estimate, Angle{theta}), radius * (1 + 1e-9))
          << "l=" << l << " theta=" << theta;
      // membership, allowing for rounding when theta sits on an endpoint
      ASSERT_TRUE(arc_contains(r.final_arc, Angle{theta}) ||
                  circ_dist(r.final_arc.lower(), Angle{theta}) < 1e-12 ||
                  circ_dist(r.final_arc.upper(), Angle{theta}) < 1e-12);
    }
  }
}

// Same with every stage arc covering its target at a random offset, which
// exercises all three refinement cases.
TEST(Refine, SoundOnArbitraryCoveringArcs) {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> inside(0.005, 0.995);
  int cases_seen[3] = {0, 0, 0};
  for (int trial = 0; trial < 50000; ++trial) {
    const int l = 1 + static_cast<int>(u(gen) * 12);
    const double theta = u(gen);
    std::vector<double> where;
    for (int k = 0; k < l; ++k) where.push_back(inside(gen));
    const auto arcs = covering_arcs(theta, kThird, where);

    RefinementState s = refine_init(arcs[0]);
    for (int k = 1; k < l; ++k) {
      const Arc doubled = arc_double(s.current_arc());
      const double delta = mod1(arcs[static_cast<std::size_t>(k)].lower().value() -
                                2.0 * s.frac_lower);
      ++cases_seen[static_cast<int>(classify_offset(delta))];
      s = refine_step(s, arcs[static_cast<std::size_t>(k)]);
      ASSERT_TRUE(subset_within(s.current_arc(), doubled));
    }
    const RefinementResult r = refine_finish(s);
    ASSERT_LE(circ_dist(r.estimate, Angle{theta}), std::ldexp(kThird, -l) * (1 + 1e-9));
  }
  EXPECT_GT(cases_seen[0], 1000);
  EXPECT_GT(cases_seen[1], 1000);
  EXPECT_GT(cases_seen[2], 1000);
}

TEST(Refine, FinalWidthHalvesExactly) {
  for (int l = 1; l <= 40; ++l) {
    const auto arcs = covering_arcs(0.123456789, kThird, std::vector<double>(l, 0.5));
    EXPECT_EQ(refine_arcs(arcs).final_arc.width(), std::ldexp(kThird, -(l - 1)));
  }
}

TEST(Refine, LongChainsKeepPrecision) {
  // z(l) itself would reach ~2^50; the telescoped sum must not lose theta.
  const double theta = 0.6180339887498949;
  const auto arcs = covering_arcs(theta, kThird, std::vector<double>(50, 0.5));
  const RefinementResult r = refine_arcs(arcs);
  EXPECT_LT(circ_dist(r.estimate, Angle{theta}), 1e-15);
}
