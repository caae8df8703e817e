#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "carnot/error.hpp"
#include "carnot/trial.hpp"
#include "test_support.hpp"

using namespace carnot;
using carnot::testing::random_point;

namespace {

TabulatedGrid small_grid() {
  TabulatedGrid g;
  g.shape = {3, 4, 2};
  g.lower = {-1, -1, -2};
  g.upper = {1, 2, 2};
  g.values.resize(24);
  for (std::size_t i = 0; i < 24; ++i) g.values[i] = 0.1 * static_cast<double>(i) - 0.7;
  return g;
}

std::vector<TrialFunction> family(const GroupSpec& h) {
  return {TrialFunction::aniso_bump(h, {1.0, 0.5}, Point{0.5, 0.0, 0.2}),
          TrialFunction::ball_indicator(h, BallSpec{Point{0.0, 0.3, 0.0}, 1.2}),
          TrialFunction::tabulated(h, small_grid())};
}

}  // namespace

TEST(Trial, ZeroFunction) {
  auto h = groups::heisenberg(1);
  TrialFunction z;
  EXPECT_EQ(z(h, Point{1, 2, 3}.view()), 0.0);
  EXPECT_EQ(z.amplitude(), 0.0);
}

TEST(Trial, BumpPeaksAtCentre) {
  auto h = groups::heisenberg(1);
  Point c{0.5, -1.0, 0.2};
  auto f = TrialFunction::aniso_bump(h, {2.0, 3.0}, c);
  EXPECT_DOUBLE_EQ(f(h, c.view()), 1.0);
  EXPECT_LT(f(h, Point{1.5, -1.0, 0.2}.view()), 1.0);
  EXPECT_EQ(f.focus(h), c);
  EXPECT_THROW(TrialFunction::aniso_bump(h, {1.0}, c), Error);
  EXPECT_THROW(TrialFunction::aniso_bump(h, {1.0, -1.0}, c), Error);
}

TEST(Trial, ScaledMultipliesValues) {
  auto h = groups::heisenberg(1);
  for (const auto& f : family(h)) {
    auto g = f.scaled(-7.0);
    for (auto u : {Point{0.1, 0.2, 0.0}, Point{0.5, 0.0, 0.2}}) EXPECT_DOUBLE_EQ(g(h, u.view()), -7.0 * f(h, u.view()));
  }
}

TEST(Trial, DilationAndTranslationClosure) {
  auto h = groups::heisenberg(1);
  std::mt19937_64 rng(5);
  for (const auto& f : family(h)) {
    for (double t : {0.5, 2.0, 4.0}) {
      auto ft = f.dilated(h, t);
      for (int i = 0; i < 200; ++i) {
        auto u = random_point(h, rng, 1.0);
        EXPECT_NEAR(ft(h, u.view()), f(h, dilate(h, t, u).view()), 1e-12) << f.kind_name();
      }
    }
    auto w = Point{0.3, -0.4, 1.0};
    auto fw = f.translated(h, w);
    for (int i = 0; i < 200; ++i) {
      auto u = random_point(h, rng, 1.5);
      EXPECT_NEAR(fw(h, u.view()), f(h, multiply(h, inverse(h, w), u).view()), 1e-12) << f.kind_name();
    }
  }
  EXPECT_THROW(family(h)[0].dilated(h, 0.0), Error);
}

TEST(Grid, InterpolatesNodesAndVanishesOutside) {
  auto g = small_grid();
  // node (i, j, k) = (2, 1, 0): lower + index * spacing
  const double node[3] = {1.0, 0.0, -2.0};
  EXPECT_DOUBLE_EQ(g.interpolate(node), g.values[2 * 8 + 1 * 2 + 0]);
  const double outside[3] = {1.01, 0.0, 0.0};
  EXPECT_EQ(g.interpolate(outside), 0.0);
  // multilinear: midpoint along the last axis averages its two nodes
  const double mid[3] = {-1.0, -1.0, 0.0};
  EXPECT_NEAR(g.interpolate(mid), 0.5 * (g.values[0] + g.values[1]), 1e-15);
}

TEST(Grid, RoundTripIsBitExact) {
  auto g = small_grid();
  g.values[3] = 1.0 / 3.0;
  std::stringstream ss;
  write_grid(ss, g);
  auto back = read_grid(ss);
  EXPECT_EQ(back.shape, g.shape);
  EXPECT_EQ(back.lower, g.lower);
  EXPECT_EQ(back.upper, g.upper);
  EXPECT_EQ(back.values, g.values);
}

TEST(Grid, RejectsMalformed) {
  std::stringstream bad("not a grid\n");
  EXPECT_THROW(read_grid(bad), Error);
  auto g = small_grid();
  std::stringstream ss;
  write_grid(ss, g);
  auto text = ss.str();
  std::stringstream truncated(text.substr(0, text.size() - 8));
  EXPECT_THROW(read_grid(truncated), Error);
  g.values.pop_back();
  EXPECT_THROW(g.check(), Error);
  auto h = groups::heisenberg(1);
  auto g2 = small_grid();
  g2.shape = {24};
  g2.lower = {0};
  g2.upper = {1};
  EXPECT_THROW(TrialFunction::tabulated(h, g2), Error);
}
