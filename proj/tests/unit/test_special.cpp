#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "carnot/error.hpp"
#include "carnot/group_io.hpp"
#include "carnot/special.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::sampler;
using carnot::testing::within_sigma;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Transcription with partial sums of i (m_i - 1), kept only to show where it
// departs from sampling.
double printed_layer_integral(const std::vector<int>& m, int l, double gamma) {
  const int r = static_cast<int>(m.size());
  double fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  const double R = 2 * fact;
  double v = fact / (l * std::pow(R, r - 1)) / (m[l - 1] - gamma);
  for (int j = 1; j <= r; ++j) v *= sphere_surface(m[j - 1] - 1);
  for (int j = 1; j <= r; ++j) {
    if (j == l) continue;
    double acc = l * (m[l - 1] - gamma);
    for (int i = 1; i < j; ++i) {
      if (i != l) acc += i * (m[i - 1] - 1);
    }
    v *= beta(acc / R + 1, j * m[j - 1] / R);
  }
  return v;
}

}  // namespace

TEST(LogGamma, KnownValues) {
  EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-15);
  EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(kPi), 1e-15);
  EXPECT_LT(rel(log_gamma(10.0), std::log(362880.0)), 1e-13);
  for (double x = 0.05; x < 170; x *= 1.37) EXPECT_LT(rel(std::exp(log_gamma(x)), std::tgamma(x)), 1e-12) << x;
}

TEST(Beta, Values) {
  EXPECT_NEAR(beta(1, 1), 1.0, 1e-15);
  EXPECT_LT(rel(beta(1.5, 0.5), kPi / 2), 1e-14);
  for (double a : {0.3, 1.7, 12.0, 99.5})
    for (double b : {0.2, 2.5, 40.0}) {
      EXPECT_EQ(beta(a, b), beta(b, a));
      const double direct = std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
      EXPECT_LT(rel(beta(a, b), direct), 1e-12) << a << "," << b;
    }
  EXPECT_THROW(beta(0.0, 1.0), Error);
  EXPECT_THROW(beta(1.0, -2.0), Error);
}

TEST(Beta, NoOverflowAtLargeArguments) {
  EXPECT_TRUE(std::isfinite(log_beta(300.0, 400.0)));
  EXPECT_GT(beta(300.0, 400.0), 0.0);
}

TEST(SphereSurface, LowDimensions) {
  EXPECT_DOUBLE_EQ(sphere_surface(0), 2.0);
  EXPECT_LT(rel(sphere_surface(1), 2 * kPi), 1e-15);
  EXPECT_LT(rel(sphere_surface(2), 4 * kPi), 1e-15);
  EXPECT_LT(rel(sphere_surface(3), 2 * kPi * kPi), 1e-14);
}

TEST(LayerIntegral, ExactAnchors) {
  EXPECT_LT(rel(layer_weight_integral({{2}, 1, 0.0}), kPi), 1e-14);
  EXPECT_LT(rel(layer_weight_integral({{1}, 1, 0.0}), 2.0), 1e-14);
  EXPECT_LT(rel(layer_weight_integral({{2, 1}, 1, 0.0}), kPi * kPi / 2), 1e-10);
  EXPECT_LT(rel(layer_weight_integral({{2, 1}, 2, 0.0}), kPi * kPi / 2), 1e-10);
  // ∫_{|u|<1} |u|^{-1} du on R^2 = 2π
  EXPECT_LT(rel(layer_weight_integral({{2}, 1, 1.0}), 2 * kPi), 1e-14);
}

TEST(LayerIntegral, GammaZeroIndependentOfLayer) {
  for (auto m : std::vector<std::vector<int>>{{2, 1}, {4, 1}, {3, 3}, {2, 1, 1}, {3, 2, 2}}) {
    const double v1 = layer_weight_integral({m, 1, 0.0});
    for (int l = 2; l <= static_cast<int>(m.size()); ++l) EXPECT_LT(rel(layer_weight_integral({m, l, 0.0}), v1), 1e-10);
  }
}

TEST(LayerIntegral, BetaProductEqualsDirichletForm) {
  for (auto m : std::vector<std::vector<int>>{{1}, {3}, {2, 1}, {4, 1}, {3, 3}, {2, 1, 1}, {3, 2, 2}}) {
    for (int l = 1; l <= static_cast<int>(m.size()); ++l) {
      for (double frac : {0.0, 0.25, 0.5, 0.9}) {
        LayerIntegralParams p{m, l, frac * m[static_cast<std::size_t>(l - 1)]};
        EXPECT_LT(rel(layer_weight_integral(p), layer_weight_integral_dirichlet(p)), 1e-12);
      }
    }
  }
}

TEST(LayerIntegral, DomainChecks) {
  EXPECT_THROW(layer_weight_integral({{2, 1}, 1, 2.0}), Error);
  EXPECT_THROW(layer_weight_integral({{2, 1}, 3, 0.0}), Error);
  EXPECT_THROW(layer_weight_integral({{2, 1}, 0, 0.0}), Error);
}

TEST(LayerIntegral, DivergesAsGammaApproachesLayerDimension) {
  double prev = 0;
  for (double g : {1.0, 1.5, 1.9, 1.99, 1.999}) {
    const double v = layer_weight_integral({{2, 1}, 1, g});
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_GT(prev, 100.0);
}

TEST(LayerIntegral, UnitBallVolumeMatchesGammaZero) {
  auto h = groups::heisenberg(2);
  EXPECT_EQ(unit_ball_volume(h), layer_weight_integral(LayerIntegralParams::of(h, 1, 0.0)));
}

TEST(LayerOracle, HeisenbergAndDisk) {
  auto h = groups::heisenberg(1);
  EXPECT_TRUE(within_sigma(layer_weight_integral_oracle(h, 1, 0.0, sampler(1000000, 21)), kPi * kPi / 2));
  auto r2 = groups::euclidean(2);
  EXPECT_TRUE(within_sigma(layer_weight_integral_oracle(r2, 1, 1.0, sampler(1000000, 22)), 2 * kPi));
  EXPECT_TRUE(within_sigma(layer_weight_integral_oracle(h, 1, 1.5, sampler(1000000, 23)),
                           layer_weight_integral(LayerIntegralParams::of(h, 1, 1.5))));
}

TEST(LayerOracle, PrintedPartialSumsDepartAtStepThree) {
  // Step <= 2: every partial sum is empty and the two agree.
  EXPECT_LT(rel(printed_layer_integral({2, 1}, 1, 0.5), layer_weight_integral({{2, 1}, 1, 0.5})), 1e-12);
  EXPECT_LT(rel(printed_layer_integral({3, 3}, 2, 1.0), layer_weight_integral({{3, 3}, 2, 1.0})), 1e-12);
  // Step 3, m = (2, 1, 1): sampling sides with the i m_i partial sums.
  auto g = load_group_spec(CARNOT_DATA_DIR "/groups/engel.json");
  auto mc = layer_weight_integral_oracle(g, 1, 0.0, sampler(1000000, 24));
  const double corrected = layer_weight_integral(LayerIntegralParams::of(g, 1, 0.0));
  const double printed = printed_layer_integral({2, 1, 1}, 1, 0.0);
  EXPECT_TRUE(within_sigma(mc, corrected));
  EXPECT_GT(std::abs(mc.z_score(printed)), 10.0);
  EXPECT_GT(rel(printed, corrected), 0.03);
}
