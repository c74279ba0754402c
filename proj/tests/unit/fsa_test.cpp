#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "regcocycle/fsa.hpp"

using namespace regcocycle::fsa;

namespace {

const Alphabet ab({"a", "b"});

// Enumeration oracle: every word over {a, b} up to length n.
std::vector<SymbolWord> all_words(std::size_t n) {
  std::vector<SymbolWord> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].size() < n)
      for (Symbol s = 0; s < 2; ++s) {
        SymbolWord w = out[i];
        w.push_back(s);
        out.push_back(w);
      }
  return out;
}

Dfa random_dfa(std::mt19937_64& rng, int states) {
  std::uniform_int_distribution<int> to(0, states - 1), coin(0, 2);
  std::vector<StateId> delta(static_cast<std::size_t>(2 * states));
  for (auto& d : delta) d = to(rng);
  std::vector<char> acc(static_cast<std::size_t>(states));
  for (auto& a : acc) a = coin(rng) == 0;
  return Dfa(ab, 0, delta, acc);
}

}  // namespace

TEST(Dfa, RejectsMalformedTables) {
  EXPECT_THROW(Dfa(ab, 0, {0}, {1}), AutomatonError);
  EXPECT_THROW(Dfa(ab, 0, {0, 5}, {1}), AutomatonError);
  EXPECT_THROW(Dfa(ab, 3, {0, 0}, {1}), AutomatonError);
}

TEST(Dfa, FromWordsAcceptsExactlyTheList) {
  const std::vector<SymbolWord> words{{}, {0, 1}, {1, 1, 0}};
  const Dfa d = Dfa::from_words(ab, words);
  for (const auto& w : all_words(5))
    EXPECT_EQ(d.accepts(w), std::find(words.begin(), words.end(), w) != words.end());
  EXPECT_EQ(d.enumerate(10).size(), 3u);
}

TEST(Dfa, BooleanOperationsAgreeWithEnumeration) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Dfa x = random_dfa(rng, 1 + trial % 5), y = random_dfa(rng, 1 + trial % 4);
    const Dfa i = intersect(x, y), u = unite(x, y), d = difference(x, y), c = complement(x);
    for (const auto& w : all_words(7)) {
      ASSERT_EQ(i.accepts(w), x.accepts(w) && y.accepts(w));
      ASSERT_EQ(u.accepts(w), x.accepts(w) || y.accepts(w));
      ASSERT_EQ(d.accepts(w), x.accepts(w) && !y.accepts(w));
      ASSERT_EQ(c.accepts(w), !x.accepts(w));
    }
  }
}

TEST(Dfa, MinimizeIsCanonical) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Dfa x = random_dfa(rng, 2 + trial % 6);
    const Dfa m = minimize(x);
    EXPECT_LE(m.num_states(), x.num_states());
    EXPECT_EQ(minimize(m), m);
    // Same language through a detour gives the same minimal machine.
    EXPECT_EQ(minimize(complement(complement(x))), m);
    for (const auto& w : all_words(6)) ASSERT_EQ(m.accepts(w), x.accepts(w));
  }
}

TEST(Dfa, EvenNumberOfAsNeedsTwoStates) {
  // States 0..3 count a's mod 4; acceptance depends on parity only.
  const Dfa d(ab, 0, {1, 0, 2, 1, 3, 2, 0, 3}, {1, 0, 1, 0});
  EXPECT_EQ(minimize(d).num_states(), 2);
}

TEST(Nfa, ConcatenationAndDeterminization) {
  const Dfa a = Dfa::from_words(ab, std::vector<SymbolWord>{{0}, {0, 0}});
  const Dfa b = Dfa::from_words(ab, std::vector<SymbolWord>{{1}, {}});
  const Dfa ab_lang = minimize(determinize(concatenate(a, b)));
  std::set<SymbolWord> expected{{0}, {0, 0}, {0, 1}, {0, 0, 1}};
  const auto got = ab_lang.enumerate(6);
  EXPECT_EQ(std::set<SymbolWord>(got.begin(), got.end()), expected);
  const Dfa eps = Dfa::from_words(ab, std::vector<SymbolWord>{{}});
  EXPECT_EQ(minimize(determinize(concatenate(a, eps))), minimize(a));
  EXPECT_EQ(minimize(determinize(concatenate(a, Dfa::empty_language(ab)))).enumerate(5).size(), 0u);
}

TEST(TwoTape, ProjectionOfDiagonal) {
  // Pair automaton accepting (w, w) for w in {ab, b}.
  const Alphabet pairs = TwoTapeAutomaton::pair_alphabet(ab);
  auto p = [](Symbol s, Symbol t) { return TwoTapeAutomaton::pair_symbol(ab, s, t); };
  const Dfa d = Dfa::from_words(pairs, std::vector<SymbolWord>{{p(0, 0), p(1, 1)}, {p(1, 1)}});
  const TwoTapeAutomaton t(ab, d, TapeMode::Synchronous);
  EXPECT_TRUE(t.accepts(SymbolWord{0, 1}, SymbolWord{0, 1}));
  EXPECT_FALSE(t.accepts(SymbolWord{0, 1}, SymbolWord{1}));
  for (Tape tape : {Tape::First, Tape::Second}) {
    const auto words = minimize(determinize(project(t, tape))).enumerate(5);
    EXPECT_EQ(std::set<SymbolWord>(words.begin(), words.end()), (std::set<SymbolWord>{{0, 1}, {1}}));
  }
}

TEST(TwoTape, PaddedPairsAndProjectionStripPadding) {
  const Alphabet pairs = TwoTapeAutomaton::pair_alphabet(ab);
  const SymbolWord padded = pad_pair(ab, SymbolWord{0, 1, 1}, SymbolWord{1});
  ASSERT_EQ(padded.size(), 3u);
  EXPECT_EQ(TwoTapeAutomaton::split_pair(ab, padded[2]),
            std::make_pair(Symbol{1}, TwoTapeAutomaton::pad(ab)));
  const Dfa d = Dfa::from_words(pairs, std::vector<SymbolWord>{padded});
  const TwoTapeAutomaton t(ab, d, TapeMode::Synchronous);
  const auto second = minimize(determinize(project(t, Tape::Second))).enumerate(5);
  ASSERT_EQ(second.size(), 1u);
  EXPECT_EQ(second[0], (SymbolWord{1}));
}

TEST(TwoTape, LetterAfterPadIsRejected) {
  const Alphabet pairs = TwoTapeAutomaton::pair_alphabet(ab);
  const Symbol bad0 = TwoTapeAutomaton::pair_symbol(ab, TwoTapeAutomaton::pad(ab), 0);
  const Symbol bad1 = TwoTapeAutomaton::pair_symbol(ab, 0, 0);
  const Dfa d = Dfa::from_words(pairs, std::vector<SymbolWord>{{bad0, bad1}});
  EXPECT_THROW(TwoTapeAutomaton(ab, d, TapeMode::Synchronous), AutomatonError);
}

TEST(Prop22, SingleValueRelabelsTheLanguage) {
  // L = a*, one letter a with the single value 0: L' is a'* and the full
  // product has |L| * |level| + 1 states before minimization.
  const Alphabet a({"a"});
  const Dfa l(a, 0, {0}, {1});
  const Alphabet y({"a'"});
  const std::vector<LevelMachine> machines{{0, 0, l}};
  const Dfa lifted = prop22_product(l, machines, y);
  for (std::size_t n = 0; n < 6; ++n) EXPECT_TRUE(lifted.accepts(SymbolWord(n, 0)));
  const Dfa full = prop22_product(l, machines, y, ProductMode::Full);
  EXPECT_EQ(minimize(full), minimize(lifted));
}

TEST(Prop22, SplitsByValue) {
  // L = {a, b}*, and σ(w, a) is the parity of |w|; b has one value.
  const Dfa l(ab, 0, {0, 0}, {1});
  const Dfa even(ab, 0, {1, 1, 0, 0}, {1, 0});
  const Dfa odd = complement(even);
  const Alphabet y({"a{0}", "a{1}", "b"});
  const std::vector<LevelMachine> machines{{0, 0, even}, {0, 1, odd}, {1, 2, l}};
  const Dfa lifted = minimize(prop22_product(l, machines, y));
  EXPECT_TRUE(lifted.accepts(SymbolWord{0, 2, 0}));   // a at 0, b, a at 2
  EXPECT_FALSE(lifted.accepts(SymbolWord{0, 2, 1}));
  EXPECT_FALSE(lifted.accepts(SymbolWord{1}));        // a at 0 is even
  EXPECT_TRUE(lifted.accepts(SymbolWord{2, 1, 0}));   // b, a at 1, a at 2
  EXPECT_FALSE(lifted.accepts(SymbolWord{2, 0}));
}

TEST(Prop22, OverlappingLevelsAreReported) {
  const Dfa l(ab, 0, {0, 0}, {1});
  const Alphabet y({"a{0}", "a{1}", "b"});
  const std::vector<LevelMachine> machines{{0, 0, l}, {0, 1, l}, {1, 2, l}};
  EXPECT_THROW(prop22_product(l, machines, y), AutomatonError);
}

TEST(FellowTraveller, SynchronousVersusAsynchronous) {
  // Integer paths 0,1,2,...: pair 0 walks at speeds 1 and 1 (distance 0),
  // pair 1 compares positions i and j with lengths 4 and 2.
  const std::vector<std::pair<std::size_t, std::size_t>> lengths{{3, 3}, {4, 2}};
  auto metric = [](std::size_t pair, std::size_t i, std::size_t j) -> std::optional<int> {
    const int scale = pair == 1 ? 2 : 1;
    return std::abs(static_cast<int>(i) - scale * static_cast<int>(j));
  };
  const auto sync = fellow_traveller_check(lengths, metric, TapeMode::Synchronous);
  const auto async = fellow_traveller_check(lengths, metric, TapeMode::Asynchronous);
  EXPECT_EQ(sync.checked, 2u);
  EXPECT_GE(sync.delta, 2);
  EXPECT_LE(async.delta, sync.delta);
  EXPECT_LE(async.delta, 1);
}

TEST(Text, RoundTripAndDot) {
  std::mt19937_64 rng(3);
  const Dfa d = minimize(random_dfa(rng, 5));
  EXPECT_EQ(from_text(to_text(d)), d);
  EXPECT_THROW(from_text("states x\n"), AutomatonError);
  const std::string dot = to_dot(d, "m");
  EXPECT_NE(dot.find("digraph \"m\""), std::string::npos);
}
