#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "regcocycle/verify.hpp"

using namespace regcocycle;
using regcocycle::testing::ball2;

namespace {

Verifier& section_verifier() {
  static Verifier v(VerifyConfig{});
  return v;
}

}  // namespace

TEST(Extension, GroupLaw) {
  const Extension ext(std::make_shared<const SectionCocycle>(ball2(4)));
  const auto& g = ext.ball().group();
  // The fiber is central and adds.
  EXPECT_EQ(ext.mul(ext.fiber({2}), ext.fiber({-5})), ext.fiber({-3}));
  const ExtElement p = ext.section_word(g.parse("a1 b1"));
  const ExtElement q{ext.ball().element(g.parse("B2")), {4}};
  EXPECT_EQ(ext.mul(p, ext.inverse(p)), ext.identity());
  EXPECT_EQ(ext.mul(ext.inverse(q), q), ext.identity());
  EXPECT_EQ(ext.mul(ext.mul(p, q), ext.fiber({1})), ext.mul(p, ext.mul(q, ext.fiber({1}))));
  EXPECT_EQ(ext.product({}), ext.identity());
  EXPECT_EQ(ext.format(ext.fiber({3})), "(1, (3))");
  EXPECT_EQ(ext.format(q), "(B2, (4))");
}

TEST(Extension, RelatorLiftsToTheCentralGenerator) {
  // Prefixes of the relator have length at most 2g, so ball(4) suffices.
  const Extension ext(std::make_shared<const SectionCocycle>(ball2(4)));
  EXPECT_EQ(relator_product(ext), ext.fiber({SectionCocycle::k_of_genus(2)}));
  EXPECT_EQ(relator_product(ext), ext.fiber({16}));
}

TEST(Extension, Associativity) {
  const Extension ext(std::make_shared<const SectionCocycle>(ball2(4)));
  const auto& b = ext.ball();
  std::mt19937_64 rng(6);
  const auto small = b.elements_up_to(1);
  std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
  std::uniform_int_distribution<std::int64_t> fib(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const ExtElement p{small[pick(rng)], {fib(rng)}}, q{small[pick(rng)], {fib(rng)}}, r{small[pick(rng)], {fib(rng)}};
    EXPECT_EQ(ext.mul(ext.mul(p, q), r), ext.mul(p, ext.mul(q, r)));
  }
}

TEST(Extension, CentralityDependsOnTheAction) {
  const auto b = ball2(3);
  const Extension central(std::make_shared<const SectionCocycle>(b));
  EXPECT_TRUE(centrality_check(central, 2).central);
  const Coefficients c;
  std::vector<Eigen::MatrixXi> m(4, Eigen::MatrixXi::Identity(1, 1));
  m[2](0, 0) = -1;
  const Extension twisted(std::make_shared<const ZeroCocycle>(b, c, FiniteAction::from_matrices(b->group(), c, m)));
  const auto report = centrality_check(twisted, 2);
  EXPECT_FALSE(report.central);
  ASSERT_TRUE(report.witness);
  EXPECT_NE(twisted.mul(report.witness->first, report.witness->second),
            twisted.mul(report.witness->second, report.witness->first));
}

TEST(Extension, LeavingTheBallThrows) {
  const Extension ext(std::make_shared<const SectionCocycle>(ball2(2)));
  const ExtElement p = ext.section_word(ext.ball().group().parse("a1 a1"));
  EXPECT_THROW(ext.mul(p, p), OutOfBall);
}

TEST(YAlphabet, SymmetricAndNamed) {
  auto& v = section_verifier();
  const YAlphabet& y = v.y_alphabet();
  EXPECT_EQ(y.size(), 56u);
  EXPECT_TRUE(y.symmetric(v.extension()));
  for (const auto& s : y.symbols()) {
    EXPECT_EQ(s.value, v.extension().mul(v.extension().section(v.ball().neighbor(0, s.letter)),
                                         v.extension().fiber(s.offset)));
    EXPECT_EQ(y.find(s.letter, s.offset), y.alphabet().find(y.alphabet().name(*y.find(s.letter, s.offset))));
  }
  EXPECT_TRUE(y.find(0, {0}));
  EXPECT_TRUE(y.alphabet().find("a1{0}"));
}

TEST(Lifting, LiftEvaluatesToTheSection) {
  auto& v = section_verifier();
  const YAlphabet& y = v.y_alphabet();
  const MEvaluator eval(v.extension(), y, v.fiber_language());
  EXPECT_TRUE(lift_word(v.extension(), y, Word{}).empty());
  EXPECT_TRUE(eval.projection_is_short());
  std::mt19937_64 rng(12);
  const auto elements = v.ball().elements_up_to(5);
  std::uniform_int_distribution<std::size_t> pick(0, elements.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    const ElementId g = elements[pick(rng)];
    const auto lifted = lift_word(v.extension(), y, v.ball().word(g));
    EXPECT_EQ(lifted.size(), v.ball().word(g).size());
    EXPECT_EQ(eval.evaluate(lifted), v.extension().section(g));
    EXPECT_TRUE(v.lifted().accepts(lifted));
  }
}

TEST(Lifting, LiftedLanguageIsInBijectionWithTheBall) {
  auto& v = section_verifier();
  const auto words = v.lifted().enumerate(4);
  EXPECT_EQ(words.size(), v.ball().sphere_end(4));
  const MEvaluator eval(v.extension(), v.y_alphabet(), v.fiber_language());
  std::set<ExtElement> images;
  for (const auto& w : words) {
    const ExtElement p = eval.evaluate(w);
    EXPECT_EQ(p.fiber, Coeff{0});
    images.insert(p);
  }
  EXPECT_EQ(images.size(), words.size());
}

TEST(FiberLanguage, NormalFormsWithTorsion) {
  const Coefficients c(1, {3});
  const FiberLanguage f(c);
  EXPECT_EQ(f.alphabet().size(), 4u);
  for (std::int64_t a = -4; a <= 4; ++a)
    for (std::int64_t t = 0; t < 3; ++t) {
      const Coeff x{a, t};
      const auto nf = f.normal_form(x);
      EXPECT_EQ(f.evaluate(nf), x);
      EXPECT_TRUE(f.dfa().accepts(nf));
      EXPECT_EQ(f.norm(x), static_cast<std::size_t>(std::abs(a) + t));
    }
  // Normal forms of length <= 3: 1 + 2*3 free and torsion mixes.
  std::size_t expected = 0;
  for (std::int64_t a = -3; a <= 3; ++a)
    for (std::int64_t t = 0; t < 3; ++t) expected += std::abs(a) + t <= 3;
  EXPECT_EQ(f.dfa().enumerate(3).size(), expected);
}

TEST(MLanguage, BijectionOntoSmallLengths) {
  auto& v = section_verifier();
  const fsa::Dfa m = build_m(v.lifted(), v.fiber_language());
  const MEvaluator eval(v.extension(), v.y_alphabet(), v.fiber_language());
  const auto report = check_m_bijection(v.extension(), m, eval, v.fiber_language(), 4);
  EXPECT_TRUE(report.passed());
  EXPECT_GT(report.words, v.ball().sphere_end(4));
}

TEST(Distances, SectionDistancesEqualGroupDistances) {
  auto& v = section_verifier();
  const MEvaluator eval(v.extension(), v.y_alphabet(), v.fiber_language());
  std::mt19937_64 rng(21);
  const auto report = section_distance_check(v.extension(), v.y_alphabet(), eval, 4, 200, rng);
  EXPECT_TRUE(report.passed());
  const auto& ext = v.extension();
  const auto bound = ext_distance_bound(ext, v.fiber_language(), ext.identity(), ext.fiber({5}));
  ASSERT_TRUE(bound);
  EXPECT_EQ(*bound, 5);
}
