#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "carnot/conditions.hpp"
#include "carnot/error.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::sampler;

TEST(Triangle, EuclideanIsExact) {
  for (int m : {1, 2, 4}) {
    auto t = estimate_triangle_constant(groups::euclidean(m), 20000, 3);
    EXPECT_GE(t.value, 1.0);
    EXPECT_LE(t.value, 1.0 + 1e-12);
  }
}

TEST(Triangle, HeisenbergMonotoneInSampleCount) {
  auto h = groups::heisenberg(1);
  double prev = 1.0;
  for (std::uint64_t n : {100u, 1000u, 10000u, 50000u}) {
    auto t = estimate_triangle_constant(h, n, 7);
    EXPECT_GE(t.value, prev);
    EXPECT_GE(t.value, 1.0 - 1e-12);
    prev = t.value;
    if (t.value > 1.0) {
      const double ratio = pseudo_distance(h, t.u1, t.u2) /
                           (pseudo_distance(h, t.u1, t.u3) + pseudo_distance(h, t.u3, t.u2));
      EXPECT_NEAR(ratio, t.value, 1e-12);
    }
  }
  EXPECT_THROW(estimate_triangle_constant(h, 0, 1), Error);
}

TEST(Triangle, CacheIsStable) {
  auto h = groups::heisenberg(1);
  const auto& a = cached_triangle_constant(h);
  const auto& b = cached_triangle_constant(groups::heisenberg(1));
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(a.n_triples, kTriangleTriples);
}

TEST(Phi, Values) {
  EXPECT_DOUBLE_EQ(phi_of_ball(2.0, 1.0, 1.0), 81.0);
  EXPECT_NEAR(phi_of_ball(1.7, 1.3, 2.0), phi_of_ball(1.7, 1.3, 1.0) / std::pow(2.0, 1.7), 1e-12);
  EXPECT_DOUBLE_EQ(phi_of_ball(0.0, 1.2, 3.0), 1.0);
  EXPECT_THROW(phi_of_ball(1.0, 0.5, 1.0), Error);
  EXPECT_THROW(phi_of_ball(1.0, 1.0, 0.0), Error);
}

TEST(Cond35, BoundaryAndInteriorCases) {
  auto h = groups::heisenberg(1);
  auto ball = [&](double r) { return BallSpec::centered(h, r); };
  auto rep = check_condition_35(h, 2.0, 1.0, {{ball(1), ball(1)}, {ball(1), ball(4)}, {ball(1), ball(2)}}, 1.0);
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rep.bound, 4.0);
  EXPECT_NEAR(rep.rows[0].lhs, 1.0, 1e-12);
  EXPECT_NEAR(rep.rows[1].lhs, rep.bound, 1e-12);
  EXPECT_NEAR(rep.rows[2].lhs, 2.0, 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(Cond35, IdentityHoldsForRandomPairs) {
  auto h = groups::heisenberg(1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 10.0), frac(0.01, 4.0);
  std::vector<BallPair> pairs;
  for (int i = 0; i < 200; ++i) {
    const double r = u(rng);
    pairs.push_back({BallSpec::centered(h, r), BallSpec::centered(h, frac(rng) * r)});
  }
  auto rep = check_condition_35(h, 1.3, 0.9, pairs, 1.0);
  for (const auto& row : rep.rows) {
    EXPECT_LE(row.identity_residual, 1e-12);
    EXPECT_TRUE(row.pass);
  }
}

TEST(Cond35, RejectsBadInput) {
  auto h = groups::heisenberg(1);
  auto pairs = default_ball_pairs(h, {1.0});
  EXPECT_EQ(pairs.size(), 4u);
  try {
    check_condition_35(h, 2.0, 2.0, pairs, 1.0);
    FAIL() << "expected BadEpsilon";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::bad_epsilon);
  }
  EXPECT_THROW(check_condition_35(h, 2.0, 0.0, pairs, 1.0), Error);
  std::vector<BallPair> loose{{BallSpec::centered(h, 1.0), BallSpec::centered(h, 5.0)}};
  EXPECT_THROW(check_condition_35(h, 2.0, 1.0, loose, 1.0), Error);
}

TEST(TauWindow, BoundsAndDefaults) {
  auto h = groups::heisenberg(1);
  Cond36Config cfg;
  cfg.lambda = 2, cfg.alpha = 0.5, cfg.beta = 0.5, cfg.p = 2, cfg.q = 4;
  auto w = tau_window(h, cfg);
  EXPECT_DOUBLE_EQ(w.upper, 2.0);  // min(4/(0.5*4), 4/(0.5*2))
  EXPECT_DOUBLE_EQ(w.pick(std::nullopt), 1.5);
  EXPECT_THROW(w.pick(2.5), Error);
  EXPECT_THROW(w.pick(1.0), Error);
  cfg.alpha = 0, cfg.beta = 0;
  auto unbounded = tau_window(h, cfg);
  EXPECT_TRUE(std::isinf(unbounded.upper));
  EXPECT_DOUBLE_EQ(unbounded.pick(std::nullopt), 2.0);
}

TEST(Cond36, FullNormProductIsConstant) {
  auto h = groups::heisenberg(1);
  Cond36Config cfg;
  cfg.lambda = 2, cfg.alpha = 0.5, cfg.beta = 0.5, cfg.p = 2, cfg.q = 4;
  cfg.radii = {0.5, 1.0, 2.0, 4.0};
  cfg.sampler = sampler(200000, 31);
  auto rep = check_condition_36(h, cfg, 1.0);
  EXPECT_NEAR(rep.exponent, 0.0, 1e-12);
  EXPECT_TRUE(rep.pass);
  for (const auto& row : rep.rows) EXPECT_LE(std::abs(row.m2_z), 3.0);
}

TEST(Cond36, UnweightedReducesToPowerLaw) {
  auto h = groups::heisenberg(1);
  Cond36Config cfg;
  cfg.lambda = 2, cfg.p = 2, cfg.q = 3;
  cfg.radii = {1.0, 2.0};
  cfg.sampler = sampler(100000, 32);
  auto rep = check_condition_36(h, cfg, 1.0);
  ASSERT_EQ(rep.rows.size(), 2u);
  const double expected = std::pow(2.0, rep.lambda_bar - cfg.lambda);
  EXPECT_NEAR(rep.rows[1].product.value / rep.rows[0].product.value, expected, 0.02 * expected);
  EXPECT_FALSE(rep.pass);
}

TEST(Cond36, TauOutsideWindow) {
  auto h = groups::heisenberg(1);
  Cond36Config cfg;
  cfg.lambda = 2, cfg.alpha = 0.5, cfg.beta = 0.5, cfg.p = 2, cfg.q = 4, cfg.tau = 3.0;
  cfg.sampler = sampler(1000, 1);
  try {
    check_condition_36(h, cfg, 1.0);
    FAIL() << "expected BadTau";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::bad_tau);
  }
}
