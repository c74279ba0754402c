#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"

using namespace regcocycle;
using regcocycle::testing::ball2;
using regcocycle::testing::surface;

TEST(Ball, SmallSphereSizes) {
  EXPECT_EQ(ball2(1)->size(), 9u);
  EXPECT_EQ(ball2(2)->size(), 65u);
  EXPECT_EQ(CayleyBall::build(surface(3), 1).size(), 13u);
  // No identifications below half the relator length: spheres grow by
  // (4g - 1) until radius 2g.
  const auto b = ball2(5);
  const std::size_t expected[] = {1, 8, 56, 392, 2736};
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(b->sphere_size(k), expected[k]) << "sphere " << k;
}

TEST(Ball, Sphere4MergesMatchHalfRelators) {
  // Free words of length 4: 8 * 7^3 = 2744. Each of the 8 cyclic
  // subwords of r and r^-1 of length 4 has an equal word of length 4.
  const auto b = ball2(5);
  const auto& st = b->stats()[4];
  EXPECT_EQ(st.extensions, 2744u);
  EXPECT_EQ(st.same_length_merges + st.shorter_merges, 8u);
  EXPECT_EQ(st.shorter_merges, 0u);
}

TEST(Ball, CanonicalWordsAreShortlexLeastGeodesics) {
  const auto b = ball2(5);
  for (ElementId e = 0; e < static_cast<ElementId>(b->sphere_end(4)); e += 7) {
    const auto geodesics = b->geodesic_words(e);
    ASSERT_FALSE(geodesics.empty());
    EXPECT_EQ(geodesics.front(), b->word(e));
    for (const Word& w : geodesics) {
      EXPECT_EQ(static_cast<int>(w.size()), b->length(e));
      EXPECT_EQ(b->walk(b->identity(), w), e);
    }
  }
}

TEST(Ball, AdjacencyIsAnInvolutionAndAgreesWithDehn) {
  const auto b = ball2(4);
  const auto& g = b->group();
  for (ElementId e = 0; e < static_cast<ElementId>(b->size()); ++e)
    for (Letter x = 0; x < 8; ++x) {
      const ElementId f = b->neighbor(e, x);
      if (f == kNone) {
        EXPECT_EQ(b->length(e), b->radius());
        continue;
      }
      EXPECT_EQ(b->neighbor(f, inverse_letter(x)), e);
      EXPECT_LE(std::abs(b->length(f) - b->length(e)), 1);
      // Independent check of the identification by Dehn's algorithm.
      EXPECT_TRUE(g.equal(concat(b->word(e), Word{x}), b->word(f)));
    }
}

TEST(Ball, DistinctCanonicalWordsAreDistinctElements) {
  const auto b = ball2(3);
  const auto& g = b->group();
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<ElementId> pick(0, static_cast<ElementId>(b->size()) - 1);
  for (int trial = 0; trial < 2000; ++trial) {
    const ElementId u = pick(rng), v = pick(rng);
    EXPECT_EQ(g.equal(b->word(u), b->word(v)), u == v);
  }
}

TEST(Ball, ArithmeticAndLookup) {
  const auto b = ball2(4);
  const auto& g = b->group();
  const ElementId x = b->element(g.parse("a1 b1"));
  const ElementId y = b->element(g.parse("A1"));
  const auto xy = b->multiply(x, y);
  ASSERT_TRUE(xy);
  EXPECT_EQ(b->word(*xy), g.parse("a1 b1 A1"));
  EXPECT_EQ(b->inverse(x), b->find(g.parse("B1 A1")));
  EXPECT_EQ(b->distance(x, y), 3);
  // Half the relator is also spelled by the inverse of the other half.
  EXPECT_EQ(b->find(g.parse("a1 b1 A1 B1")), b->find(g.parse("b2 a2 B2 A2")));
  EXPECT_FALSE(b->find(g.parse("a1 a1 a1 a1 a1")));
  EXPECT_THROW(b->element(g.parse("a1 a1 a1 a1 a1")), OutOfBall);
  EXPECT_EQ(b->canonical(g.parse("a1 b1 B1")), g.parse("a1"));
}

TEST(Ball, ElementLimitRaisesResourceError) {
  EXPECT_THROW(CayleyBall::build(surface(2), 6, 1000), ResourceError);
}

TEST(Ball, RestoreRejectsCorruptedData) {
  const auto b = ball2(2);
  std::vector<Word> words;
  std::vector<std::vector<ElementId>> adjacency;
  for (ElementId e = 0; e < static_cast<ElementId>(b->size()); ++e) {
    words.push_back(b->word(e));
    std::vector<ElementId> row;
    for (Letter x = 0; x < 8; ++x) row.push_back(b->neighbor(e, x));
    adjacency.push_back(row);
  }
  const CayleyBall copy = CayleyBall::restore(surface(2), 2, words, adjacency);
  EXPECT_EQ(copy.size(), b->size());
  std::swap(adjacency[1][2], adjacency[1][3]);
  EXPECT_THROW(CayleyBall::restore(surface(2), 2, words, adjacency), GroupError);
}
