#include <gtest/gtest.h>

#include <cmath>

#include "carnot/measure.hpp"
#include "carnot/random.hpp"
#include "test_support.hpp"

using namespace carnot;

TEST(StreamRng, ReproducibleAndDistinct) {
  StreamRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_NE(x, d.next_u64());
  }
}

TEST(StreamRng, NearbySeedsDoNotShareStreams) {
  // (seed, stream) = (s, k+1) and (s+1, k) must differ.
  StreamRng a(100, 1), b(101, 0);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(StreamRng, UniformRange) {
  StreamRng r(7, 0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double p = r.uniform_pos();
    ASSERT_GT(p, 0.0);
    ASSERT_LE(p, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(UniformSource, LowDiscrepancyIsDeterministicAndInUnitCube) {
  UniformSource a(SamplingScheme::low_discrepancy, 9, 0, 3, 0);
  UniformSource b(SamplingScheme::low_discrepancy, 9, 0, 3, 0);
  for (int i = 0; i < 1000; ++i) {
    a.next_point();
    b.next_point();
    for (std::size_t d = 0; d < 3; ++d) {
      EXPECT_EQ(a[d], b[d]);
      EXPECT_GE(a[d], 0.0);
      EXPECT_LT(a[d], 1.0);
    }
  }
}

TEST(Sampling, ResultIndependentOfWorkerCount) {
  auto h = groups::heisenberg(1);
  auto ball = BallSpec::centered(h, 1.0);
  auto integrand = [](std::span<const double> u) { return 1.0 + u[0] * u[0]; };
  for (auto scheme : {SamplingScheme::pseudo_random, SamplingScheme::low_discrepancy}) {
    auto cfg = carnot::testing::sampler(50000, 5);
    cfg.scheme = scheme;
    cfg.workers = 1;
    auto one = mc_integrate(h, ball, integrand, WeightSpec::full_norm(-1.0), cfg);
    cfg.workers = 4;
    auto four = mc_integrate(h, ball, integrand, WeightSpec::full_norm(-1.0), cfg);
    EXPECT_EQ(one.value, four.value);
    EXPECT_EQ(one.std_error, four.std_error);
  }
}

TEST(Sampling, SameSeedSameEstimate) {
  auto h = groups::heisenberg(1);
  auto ball = BallSpec::centered(h, 1.0);
  auto a = ball_volume(h, ball, carnot::testing::sampler(20000, 77));
  auto b = ball_volume(h, ball, carnot::testing::sampler(20000, 77));
  auto c = ball_volume(h, ball, carnot::testing::sampler(20000, 78));
  EXPECT_EQ(a.value, b.value);
  EXPECT_NE(a.value, c.value);
}
