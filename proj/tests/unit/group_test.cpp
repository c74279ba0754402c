#include <gtest/gtest.h>

#include <random>

#include "regcocycle/group.hpp"

using namespace regcocycle;

namespace {

Word random_word(std::mt19937_64& rng, int letters, int length) {
  std::uniform_int_distribution<int> d(0, letters - 1);
  Word w;
  for (int i = 0; i < length; ++i) w.push_back(d(rng));
  return w;
}

// Free-group product of the conjugates c r^e c^-1 of a Dehn trace.
Word trace_product(const SurfaceGroup& g, const DehnResult& r) {
  Word out;
  for (const auto& step : r.trace) {
    const Word rel = step.sign > 0 ? g.relator() : inverse(g.relator());
    out = concat(out, concat(step.conjugator, concat(rel, inverse(step.conjugator))));
  }
  return free_reduce(out);
}

}  // namespace

TEST(Letters, EncodingAndNames) {
  const SurfaceGroup g(2);
  EXPECT_EQ(g.num_letters(), 8);
  EXPECT_EQ(g.letter(1, false), 0);
  EXPECT_EQ(g.letter(1, true), 2);
  EXPECT_EQ(g.letter(2, true, true), 7);
  EXPECT_EQ(inverse_letter(4), 5);
  EXPECT_EQ(g.letter_name(0), "a1");
  EXPECT_EQ(g.letter_name(7), "B2");
  EXPECT_EQ(g.format(g.relator()), "a1 b1 A1 B1 a2 b2 A2 B2");
  EXPECT_EQ(g.parse("a1b1A1B1a2b2A2B2"), g.relator());
  EXPECT_EQ(g.parse(""), Word{});
  EXPECT_THROW(g.parse("a3"), GroupError);
  EXPECT_THROW(g.parse("c1"), GroupError);
  EXPECT_THROW(SurfaceGroup(1), GroupError);
}

TEST(FreeGroup, ReductionAndShortlex) {
  const SurfaceGroup g(2);
  EXPECT_EQ(free_reduce(g.parse("a1 b1 B1 A1 a2")), g.parse("a2"));
  EXPECT_TRUE(is_freely_reduced(g.relator()));
  EXPECT_FALSE(is_freely_reduced(g.parse("a1 A1")));
  EXPECT_EQ(inverse(g.parse("a1 b2")), g.parse("B2 A1"));
  EXPECT_TRUE(shortlex_less(g.parse("B2"), g.parse("a1 a1")));
  EXPECT_TRUE(shortlex_less(g.parse("a1 b1"), g.parse("a1 A2")));
  EXPECT_TRUE(shortlex_less(g.parse("A1"), g.parse("b1")));
  EXPECT_FALSE(shortlex_less(g.parse("a1"), g.parse("a1")));
}

TEST(Dehn, RelatorsAndConjugatesAreTrivial) {
  for (int genus : {2, 3}) {
    const SurfaceGroup g(genus);
    EXPECT_TRUE(g.is_trivial(g.relator()));
    EXPECT_TRUE(g.is_trivial(inverse(g.relator())));
    const auto r = g.dehn_reduce(g.relator());
    EXPECT_EQ(r.relator_count(), 1);
    EXPECT_EQ(g.dehn_reduce(concat(g.relator(), g.relator())).relator_count(), 2);
    // Half the relator equals the inverse of the other half.
    const Word& rel = g.relator();
    const Word first(rel.begin(), rel.begin() + 2 * genus), second(rel.begin() + 2 * genus, rel.end());
    EXPECT_TRUE(g.equal(first, inverse(second)));
    EXPECT_FALSE(g.is_trivial(g.parse("a1 b1 A1")));
  }
}

TEST(Dehn, TraceReconstructsTheWord) {
  const SurfaceGroup g(2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    Word w = random_word(rng, 8, 4 + trial % 20);
    if (trial % 3 == 0) w = concat(w, concat(g.relator(), inverse(w)));
    const auto r = g.dehn_reduce(w);
    // w = (product of conjugates) * reduced in the free group.
    EXPECT_EQ(free_reduce(concat(trace_product(g, r), r.reduced)), free_reduce(w));
    EXPECT_LE(r.reduced.size(), free_reduce(w).size());
    if (trial % 3 == 0) {
      EXPECT_TRUE(r.reduced.empty());
    }
  }
}

TEST(Dehn, NonTrivialWordsStayNonTrivial) {
  // A geodesic word of the free group on a1, a2 never contains more than a
  // quarter of the relator, so it is nontrivial and Dehn-reduced.
  const SurfaceGroup g(2);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    Word w;
    std::uniform_int_distribution<int> d(0, 3);
    for (int i = 0; i < 12; ++i) {
      const Letter x = std::array<Letter, 4>{0, 1, 4, 5}[static_cast<std::size_t>(d(rng))];
      if (!w.empty() && w.back() == inverse_letter(x)) continue;
      w.push_back(x);
    }
    if (w.empty()) continue;
    EXPECT_FALSE(g.is_trivial(w));
    EXPECT_EQ(g.dehn_word(w), w);
  }
}
