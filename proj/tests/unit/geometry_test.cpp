#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "regcocycle/geometry.hpp"

using namespace regcocycle;

TEST(Link, IsOneCycleThroughEveryGerm) {
  for (int genus : {2, 3, 4}) {
    const SurfaceGroup g(genus);
    const VertexLink link(g);
    EXPECT_EQ(link.wedges(), 4 * genus);
    const std::set<Letter> germs(link.cycle().begin(), link.cycle().end());
    EXPECT_EQ(germs.size(), static_cast<std::size_t>(4 * genus));
    for (Letter x = 0; x < 4 * genus; ++x) EXPECT_EQ(link.cycle()[static_cast<std::size_t>(link.position(x))], x);
  }
}

TEST(Turns, RangeAndBacktracks) {
  const SurfaceGroup g(2);
  const VertexLink link(g);
  const TurnTable turns(link);
  for (Letter in = 0; in < 8; ++in)
    for (Letter out = 0; out < 8; ++out) {
      const int m = turns(in, out);
      EXPECT_GT(m, -4);
      EXPECT_LE(m, 4);
      if (out == inverse_letter(in)) {
        EXPECT_EQ(m, 4);
      }
    }
}

TEST(Turns, RelatorTurnsLeftAtEveryCorner) {
  // Corners of the fundamental polygon: each interior turn is 2g - 1 units
  // of pi/2g to the left, short of a backtrack by the vertex angle.
  for (int genus : {2, 3}) {
    const SurfaceGroup g(genus);
    const VertexLink link(g);
    const TurnTable turns(link);
    const Word& r = g.relator();
    EXPECT_EQ(n_of_word(r, turns), (4 * genus - 1) * (2 * genus - 1));
    EXPECT_EQ(closing_turn(r, turns), 2 * genus - 1);
  }
}

TEST(Model, SideLengthAndRelator) {
  for (int genus : {2, 3}) {
    const SurfaceGroup g(genus);
    const VertexLink link(g);
    const Model model(g, link);
    const long double pi = std::numbers::pi_v<long double>;
    EXPECT_NEAR(static_cast<double>(std::cosh(model.side_length() / 2)),
                static_cast<double>(1 / std::tan(pi / (4 * genus))), 1e-12);
    EXPECT_LT(model.relator_residual(g), 1e-12L);
    EXPECT_LT(model.polygon_residual(g), 1e-12L);
    for (Letter x = 0; x < 4 * genus; ++x)
      EXPECT_NEAR(static_cast<double>(Model::distance(model.generator(x))), static_cast<double>(model.side_length()),
                  1e-12);
  }
}

TEST(Model, DirectionsMatchTheLink) {
  const SurfaceGroup g(2);
  const VertexLink link(g);
  const Model model(g, link);
  const long double wedge = std::numbers::pi_v<long double> / 4;
  for (Letter x = 0; x < 8; ++x) {
    const auto dir = Model::direction(model.generator(x));
    ASSERT_TRUE(dir);
    const long double expected = wedge * link.position(x);
    EXPECT_NEAR(static_cast<double>(std::remainder(*dir - expected, 2 * std::numbers::pi_v<long double>)), 0.0,
                1e-12);
  }
}

TEST(NumericOracle, SnapsToTheTurnTable) {
  const SurfaceGroup g(2);
  const VertexLink link(g);
  const TurnTable turns(link);
  const Model model(g, link);
  const Word w = g.parse("a1 b2 b2 A1 B1 a2");
  const NumericPath p = numeric_oracle(w, model);
  ASSERT_EQ(p.turns.size(), w.size() - 1);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) EXPECT_EQ(snap_turn(p.turns[i], 2), turns(w[i], w[i + 1]));
  EXPECT_LT(p.max_snap_residual, 1e-9L);
  EXPECT_FALSE(p.closed);
}

TEST(Loops, RelatorAndItsInverse) {
  const SurfaceGroup g(2);
  const VertexLink link(g);
  const TurnTable turns(link);
  const Model model(g, link);
  const LoopAnalysis a = analyze_loop(g.relator(), g, turns, model);
  EXPECT_EQ(a.n, 21);
  EXPECT_EQ(a.theta_n, 3);
  EXPECT_EQ(a.N, 1);
  ASSERT_TRUE(a.tau);
  EXPECT_EQ(*a.tau, 1);
  EXPECT_TRUE(a.consistent);
  // Area of the fundamental polygon is 4(g-1)pi.
  EXPECT_NEAR(static_cast<double>(a.area), 4 * std::numbers::pi, 1e-9);
  const LoopAnalysis b = analyze_loop(inverse(g.relator()), g, turns, model);
  EXPECT_EQ(b.N, -1);
  ASSERT_TRUE(b.tau);
  EXPECT_EQ(*b.tau, -1);
  EXPECT_THROW(analyze_loop(g.parse("a1 b1"), g, turns, model), GeometryError);
}

TEST(Loops, CommutatorOfConjugatesIsConsistent) {
  const SurfaceGroup g(2);
  const VertexLink link(g);
  const TurnTable turns(link);
  const Model model(g, link);
  const Word u = g.parse("a2 b1");
  const Word w = free_reduce(concat(u, concat(g.relator(), concat(inverse(u), inverse(g.relator())))));
  const LoopAnalysis a = analyze_loop(w, g, turns, model);
  EXPECT_EQ(a.N, 0);
  EXPECT_TRUE(a.consistent);
  ASSERT_TRUE(a.tau);
  EXPECT_EQ(a.n + a.theta_n, 8 * 2 * (2 - 1) * a.N + 8 * *a.tau);
}
