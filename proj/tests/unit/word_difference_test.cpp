#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace regcocycle;
using regcocycle::testing::acceptor2;
using regcocycle::testing::ball2;

TEST(Acceptor, AcceptsExactlyTheCanonicalWords) {
  const auto& acc = acceptor2();
  EXPECT_EQ(acc.data_radius, 5);
  EXPECT_TRUE(acceptor_matches_ball(acc.dfa, *ball2(6), 6));
  EXPECT_EQ(acc.dfa.alphabet(), ball2(6)->group().alphabet());
}

TEST(Acceptor, TooLittleDataIsDetectedByTheNextSphere) {
  const WordAcceptor small = build_word_acceptor(*ball2(6), 3);
  EXPECT_FALSE(acceptor_matches_ball(small.dfa, *ball2(6), 6));
}

TEST(Acceptor, ShortlexReductionOfLongWords) {
  const auto b = ball2(6);
  const auto& g = b->group();
  const auto& acc = acceptor2();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> letter(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    Word w;
    for (int i = 0; i < 5 + trial % 30; ++i) w.push_back(letter(rng));
    const Word r = shortlex_reduce(*b, acc, w);
    EXPECT_TRUE(acc.dfa.accepts(r));
    EXPECT_TRUE(g.equal(r, w));
    EXPECT_TRUE(is_freely_reduced(r));
    if (const auto e = b->find(w)) {
      EXPECT_EQ(r, b->word(*e));
    }
  }
}

TEST(Differences, DiagonalPairsHaveTrivialDifference) {
  const auto b = ball2(4);
  std::vector<ElementId> out;
  ASSERT_TRUE(pair_differences(*b, b->group().parse("a1 b2 A2"), b->group().parse("a1 b2 A2"), b->identity(), out));
  for (ElementId d : out) EXPECT_EQ(d, b->identity());
}

TEST(Differences, ReductionDifferencesAreShort) {
  const auto data = reduction_differences(*ball2(6), 5);
  EXPECT_GT(data.differences.size(), 1u);
  EXPECT_LE(data.max_length, 4);
  EXPECT_TRUE(std::is_sorted(data.differences.begin(), data.differences.end()));
}

TEST(Comparator, RecognizesEqualityUpToADifference) {
  const auto b = ball2(6);
  const auto& g = b->group();
  const auto data = collect_differences(*b, PairSource::Diagonal, 0, 4);
  const auto cmp = difference_comparator(*b, data.differences, b->identity(), b->identity());
  auto sym = [&](const Word& w) { return fsa::SymbolWord(w.begin(), w.end()); };
  EXPECT_TRUE(cmp.accepts(sym(g.parse("a1 b1")), sym(g.parse("a1 b1"))));
  EXPECT_FALSE(cmp.accepts(sym(g.parse("a1 b1")), sym(g.parse("a1 b2"))));
}

TEST(EndTuples, SentinelForEmptyWords) {
  const SurfaceGroup g(2);
  const EndTuple t = end_tuple(Word{}, g.parse("a1 b1"), 8);
  EXPECT_EQ(t.first1, 8);
  EXPECT_EQ(t.last1, 8);
  EXPECT_EQ(t.first2, 0);
  EXPECT_EQ(t.last2, 2);
}

TEST(Classifier, RightMultipliersAreComplete) {
  const auto b = ball2(6);
  for (Letter x : {0, 3, 6}) {
    const auto c = build_complete_classifier(*b, acceptor2(), x, 5);
    EXPECT_TRUE(c.complete) << b->group().letter_name(x);
    EXPECT_FALSE(c.orphan);
    EXPECT_EQ(c.letter, x);
  }
}
