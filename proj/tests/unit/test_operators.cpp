#include <gtest/gtest.h>

#include <cmath>

#include "carnot/error.hpp"
#include "carnot/operators.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::agree;
using carnot::testing::sampler;
using carnot::testing::within_sigma;

namespace {

TrialFunction interval(const GroupSpec& r1) { return TrialFunction::ball_indicator(r1, BallSpec::centered(r1, 1.0)); }

// ∬_{(-1,1)^2} |u - v|^{-1/2}: reduce to ∫_{-2}^{2} (2 - |t|) |t|^{-1/2} dt,
// substitute t = s^2 and apply the trapezoid rule to the smooth remainder.
double trapezoid_pair_integral() {
  const int n = 200000;
  const double b = std::sqrt(2.0);
  const double h = b / n;
  double acc = 0;
  for (int i = 0; i <= n; ++i) {
    const double s = i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * 4.0 * (2.0 - s * s);
  }
  return acc * h;
}

}  // namespace

TEST(EvalT, IntervalRieszPotential) {
  auto r1 = groups::euclidean(1);
  auto e = eval_T(r1, interval(r1), 0.5, Point{0.0}, BallSpec::centered(r1, 2.0), sampler(400000, 1));
  EXPECT_TRUE(within_sigma(e, 4.0));
}

TEST(EvalT, ZeroFunction) {
  auto h = groups::heisenberg(1);
  auto e = eval_T(h, TrialFunction{}, 2.0, Point{0.1, 0, 0}, BallSpec::centered(h, 4.0), sampler(1000, 1));
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(EvalT, TranslationCovariance) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.3, 0.0, 0.0});
  Point u{0.2, -0.1, 0.3}, w{0.5, 0.5, -0.2};
  auto base = eval_T(h, f, 2.0, u, BallSpec::centered(h, 8.0), sampler(200000, 2));
  auto moved = eval_T(h, f.translated(h, w), 2.0, multiply(h, w, u), BallSpec{w, 8.0}, sampler(200000, 3));
  EXPECT_TRUE(agree(base, moved));
}

TEST(EvalS, UnweightedMatchesT) {
  auto h = groups::heisenberg(1);
  auto g = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.3, 0.0, 0.0});
  Point u{0.5, 0.2, -0.1};
  auto dom = BallSpec::centered(h, 8.0);
  auto s = eval_S(h, g, KernelParams{2.0, 0.0, 0.0}, u, dom, sampler(200000, 4));
  auto t = eval_T(h, g, 2.0, u, dom, sampler(200000, 5));
  EXPECT_TRUE(agree(s, t));
}

TEST(EvalS, WeightedIdentityAgainstDirectIntegral) {
  auto h = groups::heisenberg(1);
  auto g = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.3, 0.0, 0.0});
  Point u{0.5, 0.2, -0.1};
  auto dom = BallSpec::centered(h, 8.0);
  const KernelParams kp{2.0, 1.0, 1.0};
  auto s = eval_S(h, g, kp, u, dom, sampler(200000, 6));
  // |u|^{-α} ∫ g(v) |v|^{-β} |u^{-1} v|^{-λ} dv with its own hints.
  auto integrand = [&](std::span<const double> v) {
    return g(h, v) * std::pow(homogeneous_norm(h, v), -kp.beta) *
           std::pow(pseudo_distance(h, u, Point(std::vector<double>(v.begin(), v.end()))), -kp.lambda);
  };
  auto direct = mc_integrate(h, dom, integrand,
                             {Singularity::at_point(u, kp.lambda), Singularity::at_point(identity(h), kp.beta)},
                             sampler(200000, 7));
  const double pre = std::pow(homogeneous_norm(h, u), -kp.alpha);
  direct.value *= pre;
  direct.std_error *= pre;
  EXPECT_TRUE(agree(s, direct));
}

TEST(EvalS, SingularPointAndZeroFunction) {
  auto h = groups::heisenberg(1);
  auto dom = BallSpec::centered(h, 4.0);
  auto g = TrialFunction::aniso_bump(h, {1.0, 1.0});
  try {
    eval_S(h, g, KernelParams{2.0, 1.0, 1.0}, identity(h), dom, sampler(1000, 1));
    FAIL() << "expected SingularEvaluationPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::singular_evaluation_point);
  }
  KernelParams layer{2.0, 0.5, 0.0, WeightPlacement::layer, 1};
  EXPECT_THROW(eval_S(h, g, layer, Point{0.0, 0.0, 1.0}, dom, sampler(1000, 1)), Error);
  auto z = eval_S(h, TrialFunction{}, KernelParams{2.0, 1.0, 1.0}, Point{1, 0, 0}, dom, sampler(1000, 1));
  EXPECT_EQ(z.value, 0.0);
  EXPECT_EQ(z.std_error, 0.0);
}

TEST(Bilinear, IntervalAgainstQuadrature) {
  auto r1 = groups::euclidean(1);
  const double exact = 2.0 * std::pow(2.0, 1.5) / (0.5 * 1.5);
  const double quad = trapezoid_pair_integral();
  EXPECT_NEAR(quad, exact, 1e-8);
  auto e = bilinear_form(r1, interval(r1), interval(r1), KernelParams{0.5}, BallSpec::centered(r1, 1.0),
                         sampler(400000, 8));
  EXPECT_TRUE(within_sigma(e, quad));
}

TEST(Bilinear, SymmetryUnderSwap) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.5, 0.0, 0.0});
  auto g = TrialFunction::aniso_bump(h, {2.0, 0.5}, Point{-0.3, 0.2, 0.1});
  auto dom = BallSpec::centered(h, 8.0);
  auto a = bilinear_form(h, f, g, KernelParams{2.0, 1.5, 0.5}, dom, sampler(300000, 9));
  auto b = bilinear_form(h, g, f, KernelParams{2.0, 0.5, 1.5}, dom, sampler(300000, 10));
  EXPECT_TRUE(agree(a, b));
}

TEST(Bilinear, ZeroFunctions) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0});
  auto dom = BallSpec::centered(h, 8.0);
  for (const auto& [a, b] : {std::pair{f, TrialFunction{}}, std::pair{TrialFunction{}, f}}) {
    auto e = bilinear_form(h, a, b, KernelParams{2.0, 1.0, 1.0}, dom, sampler(1000, 1));
    EXPECT_EQ(e.value, 0.0);
    EXPECT_EQ(e.std_error, 0.0);
  }
}

TEST(Duality, PairingMatchesBilinearForm) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.5, 0.0, 0.0});
  auto g = TrialFunction::aniso_bump(h, {1.0, 2.0}, Point{0.0, -0.4, 0.0});
  auto dom = BallSpec::centered(h, 8.0);
  const KernelParams kp{2.0, 1.0, 1.0};
  auto b = bilinear_form(h, f, g, kp, dom, sampler(300000, 11));
  auto d = dual_pairing(h, f, g, kp, dom, sampler(2000, 12), 256);
  EXPECT_TRUE(agree(b, d));
}

TEST(Ratio, AmplitudeInvariance) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.5, 0.0, 0.0});
  auto dom = BallSpec::centered(h, 8.0);
  const KernelParams kp{2.0, 1.0, 1.0};
  auto a = stein_weiss_ratio(h, f, f, kp, 2.0, 2.0, dom, sampler(100000, 13));
  auto b = stein_weiss_ratio(h, f.scaled(7.0), f, kp, 2.0, 2.0, dom, sampler(100000, 13));
  EXPECT_NEAR(a.ratio.value, b.ratio.value, 1e-10 * a.ratio.value);
}

TEST(Ratio, DilationCovarianceUnderBalance) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.5, 0.0, 0.0});
  auto g = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{-0.5, 0.0, 0.0});
  const KernelParams kp{2.0, 1.0, 1.0};
  EXPECT_NEAR(ratio_dilation_exponent(h, kp, 2.0, 2.0), 0.0, 1e-15);
  auto base = stein_weiss_ratio(h, f, g, kp, 2.0, 2.0, BallSpec::centered(h, 8.0), sampler(300000, 14));
  const double t = 2.0;
  auto dil = stein_weiss_ratio(h, f.dilated(h, t), g.dilated(h, t), kp, 2.0, 2.0, BallSpec::centered(h, 8.0 / t),
                               sampler(300000, 15));
  EXPECT_TRUE(agree(base.ratio, dil.ratio));
}

TEST(Ratio, DilationExponentDetectsImbalance) {
  auto h = groups::heisenberg(1);
  EXPECT_NEAR(ratio_dilation_exponent(h, KernelParams{2.5, 1.0, 1.0}, 2.0, 2.0), 0.5, 1e-15);
  KernelParams layer{3.0, 0.5, 0.5, WeightPlacement::layer, 1};
  EXPECT_NEAR(ratio_dilation_exponent(h, layer, 2.0, 2.0), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(layer.weight_homogeneity(), 1.0);
  KernelParams layer2{2.0, 0.5, 0.5, WeightPlacement::layer, 2};
  EXPECT_DOUBLE_EQ(layer2.weight_homogeneity(), 2.0);
}

TEST(Ratio, TruncationStability) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.5, 0.0, 0.0});
  const KernelParams kp{2.0, 1.0, 1.0};
  auto r4 = stein_weiss_ratio(h, f, f, kp, 2.0, 2.0, BallSpec::centered(h, 4.0), sampler(300000, 16));
  auto r8 = stein_weiss_ratio(h, f, f, kp, 2.0, 2.0, BallSpec::centered(h, 8.0), sampler(300000, 17));
  EXPECT_TRUE(std::isfinite(r8.ratio.value));
  EXPECT_TRUE(agree(r4.ratio, r8.ratio));
}

TEST(Ratio, ZeroNormRaises) {
  auto h = groups::heisenberg(1);
  auto f = TrialFunction::aniso_bump(h, {1.0, 1.0}, Point{0.5, 0.0, 0.0});
  try {
    stein_weiss_ratio(h, TrialFunction{}, f, KernelParams{2.0, 1.0, 1.0}, 2.0, 2.0, BallSpec::centered(h, 8.0),
                      sampler(1000, 1));
    FAIL() << "expected ZeroNorm";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::zero_norm);
  }
}

TEST(KernelParams, Validation) {
  auto h = groups::heisenberg(1);
  EXPECT_THROW(KernelParams{4.0}.check(h), Error);
  EXPECT_THROW(KernelParams{0.0}.check(h), Error);
  EXPECT_THROW((KernelParams{2.0, 0.0, 0.0, WeightPlacement::layer, 3}.check(h)), Error);
  EXPECT_NO_THROW(KernelParams{2.0}.check(h));
}
