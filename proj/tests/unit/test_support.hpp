#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "carnot/group.hpp"
#include "carnot/measure.hpp"

namespace carnot::testing {

inline Point random_point(const GroupSpec& spec, std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point p = identity(spec);
  for (auto& x : p.coords) x = u(rng);
  return p;
}

inline SamplerConfig sampler(std::uint64_t n, std::uint64_t seed) {
  SamplerConfig c;
  c.n_samples = n;
  c.seed = seed;
  return c;
}

inline ::testing::AssertionResult within_sigma(const IntegralEstimate& e, double expected, double k = 3.0) {
  const double z = e.z_score(expected);
  if (std::abs(z) <= k) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "estimate " << e.value << " +- " << e.std_error << " vs " << expected
                                       << " (z = " << z << ")";
}

inline ::testing::AssertionResult agree(const IntegralEstimate& a, const IntegralEstimate& b, double k = 3.0) {
  const double se = std::hypot(a.std_error, b.std_error);
  const double z = se > 0 ? (a.value - b.value) / se : (a.value == b.value ? 0.0 : INFINITY);
  if (std::abs(z) <= k) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << a.value << " +- " << a.std_error << " vs " << b.value << " +- "
                                       << b.std_error << " (z = " << z << ")";
}

}  // namespace carnot::testing
