#include <gtest/gtest.h>

#include "carnot/best_constant.hpp"
#include "carnot/error.hpp"

using namespace carnot;

namespace {

SearchConfig tiny() {
  SearchConfig s;
  s.restarts = 2;
  s.max_evals = 10;
  s.eval_samples = 3000;
  s.master_seed = 99;
  s.workers = 1;
  return s;
}

}  // namespace

TEST(BestConstant, DeterministicTrace) {
  auto h = groups::heisenberg(1);
  const KernelParams kp{2.0, 1.0, 1.0};
  auto a = estimate_best_constant(h, kp, 2.0, 2.0, tiny());
  auto b = estimate_best_constant(h, kp, 2.0, 2.0, tiny());
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].params, b.trace[i].params);
    EXPECT_EQ(a.trace[i].ratio, b.trace[i].ratio);
  }
  EXPECT_EQ(a.constant_lower_bound, b.constant_lower_bound);
}

TEST(BestConstant, BoundIsRunningMaximumOfCertifiedRatios) {
  auto h = groups::heisenberg(1);
  auto r = estimate_best_constant(h, KernelParams{2.0, 1.0, 1.0}, 2.0, 2.0, tiny());
  ASSERT_EQ(r.restarts.size(), 2u);
  double best = 0;
  for (const auto& s : r.restarts) {
    best = std::max(best, s.certified_ratio);
    EXPECT_DOUBLE_EQ(s.best_so_far, best);
  }
  EXPECT_DOUBLE_EQ(r.constant_lower_bound, best);
  EXPECT_GT(r.constant_lower_bound, 0.0);
  EXPECT_TRUE(r.admissibility.pass);
}

TEST(BestConstant, AmplitudeDoesNotChangeTheSearch) {
  auto h = groups::heisenberg(1);
  const KernelParams kp{2.0, 1.0, 1.0};
  auto base = estimate_best_constant(h, kp, 2.0, 2.0, tiny());
  auto s = tiny();
  s.amplitude_f = 7.0;
  s.amplitude_g = 0.25;
  auto scaled = estimate_best_constant(h, kp, 2.0, 2.0, s);
  ASSERT_EQ(base.trace.size(), scaled.trace.size());
  for (std::size_t i = 0; i < base.trace.size(); ++i)
    EXPECT_NEAR(base.trace[i].ratio, scaled.trace[i].ratio, 1e-9 * base.trace[i].ratio);
}

TEST(BestConstant, InadmissibleRejected) {
  auto h = groups::heisenberg(1);
  try {
    estimate_best_constant(h, KernelParams{2.5, 1.0, 1.0}, 2.0, 2.0, tiny());
    FAIL() << "expected InadmissibleParams";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inadmissible_params);
  }
}

TEST(BestConstant, LayerWeightsUseLayerRegime) {
  auto h = groups::heisenberg(1);
  KernelParams kp{3.0, 0.5, 0.5, WeightPlacement::layer, 1};
  auto rep = admissibility_for(h, kp, 2.0, 2.0);
  EXPECT_EQ(rep.theorem, TheoremId::T2_2);
  EXPECT_TRUE(rep.pass);
}
