#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "regcocycle/cocycle.hpp"

using namespace regcocycle;
using regcocycle::testing::acceptor2;
using regcocycle::testing::ball2;

namespace {

// a1 acts on Z by -1, the other generators trivially.
FiniteAction sign_action(const SurfaceGroup& g, const Coefficients& c) {
  std::vector<Eigen::MatrixXi> m(4, Eigen::MatrixXi::Identity(1, 1));
  m[0](0, 0) = -1;
  return FiniteAction::from_matrices(g, c, m);
}

std::shared_ptr<const SectionCocycle> section(int radius) {
  return std::make_shared<const SectionCocycle>(ball2(radius));
}

}  // namespace

TEST(Coefficients, NormalizeAndArithmetic) {
  const Coefficients c(1, {3});
  EXPECT_EQ(c.dimension(), 2u);
  EXPECT_EQ(c.normalize({-5, -1}), (Coeff{-5, 2}));
  EXPECT_EQ(c.add({1, 2}, {1, 2}), (Coeff{2, 1}));
  EXPECT_EQ(c.neg({4, 1}), (Coeff{-4, 2}));
  EXPECT_TRUE(c.is_zero(c.sub({7, 1}, {7, 4})));
  EXPECT_THROW(c.normalize({1}), CocycleError);
  EXPECT_THROW(Coefficients(1, {1}), CocycleError);
  EXPECT_THROW(Coefficients(-1, {}), CocycleError);
}

TEST(Action, SignedPermutationsOnly) {
  const SurfaceGroup g(2);
  const Coefficients c(2, {});
  std::vector<Eigen::MatrixXi> m(4, Eigen::MatrixXi::Identity(2, 2));
  m[1] << 0, 1, 1, 0;
  const FiniteAction swap = FiniteAction::from_matrices(g, c, m);
  EXPECT_FALSE(swap.is_trivial());
  EXPECT_EQ(swap.apply({1, 5}, g.parse("b1")), (Coeff{5, 1}));
  EXPECT_EQ(swap.apply({1, 5}, g.parse("b1 B1")), (Coeff{1, 5}));
  EXPECT_EQ(swap.image_order(), 2u);
  m[1] << 2, 0, 0, 1;
  EXPECT_THROW(FiniteAction::from_matrices(g, c, m), CocycleError);
  // Mixing a free and a torsion coordinate is not an automorphism.
  const Coefficients mixed(1, {2});
  std::vector<Eigen::MatrixXi> bad(4, Eigen::MatrixXi::Identity(2, 2));
  bad[0] << 0, 1, 1, 0;
  EXPECT_THROW(FiniteAction::from_matrices(g, mixed, bad), CocycleError);
}

TEST(Action, SignActionHasOrderTwo) {
  const SurfaceGroup g(2);
  const Coefficients c;
  const FiniteAction s = sign_action(g, c);
  EXPECT_EQ(s.image_order(), 2u);
  EXPECT_EQ(s.apply({3}, g.parse("a1")), (Coeff{-3}));
  EXPECT_EQ(s.apply({3}, g.parse("a1 b2 A1")), (Coeff{3}));
  EXPECT_EQ(s.apply({3}, g.relator()), (Coeff{3}));
}

TEST(SectionCocycle, NormalizedAndLetterValuesVanish) {
  const auto s = section(4);
  const auto& b = s->ball();
  for (ElementId e : b.elements_up_to(3)) {
    EXPECT_EQ(s->value(e, b.identity()), Coeff{0});
    EXPECT_EQ(s->value(b.identity(), e), Coeff{0});
  }
  EXPECT_EQ(SectionCocycle::k_of_genus(2), 16);
  EXPECT_EQ(SectionCocycle::k_of_genus(3), 48);
}

TEST(SectionCocycle, IdentityOnSmallTriples) {
  const auto s = section(4);
  const auto report = check_cocycle_identity(*s, exhaustive_triples(s->ball(), 1));
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.checked, 729u);
  std::mt19937_64 rng(1);
  const auto random = check_cocycle_identity(*s, random_triples(s->ball(), 2, 3000, rng));
  EXPECT_TRUE(random.passed());
}

TEST(SectionCocycle, ClosedFormAgrees) {
  const auto s = section(5);
  const auto& b = s->ball();
  for (ElementId g1 : b.elements_up_to(3))
    for (ElementId g2 : b.elements_up_to(1)) {
      const ClosedForm cf = sigma_closed_form(b, g1, g2);
      const auto v = s->value(g1, g2);
      ASSERT_TRUE(v);
      ASSERT_EQ(cf.sigma, (*v)[0]) << b.group().format(b.word(g1)) << " | " << b.group().format(b.word(g2));
      if (cf.sign_rule_tau) {
        ASSERT_EQ(*cf.sign_rule_tau, cf.tau);
      }
      EXPECT_LE(std::abs(cf.tau), 1);
    }
}

TEST(FaultInjection, IsCaughtWithAWitness) {
  const auto s = section(4);
  const auto& b = s->ball();
  const ElementId g1 = b.element(b.group().parse("a1")), g2 = b.element(b.group().parse("b1"));
  const FaultInjected f(s, g1, g2, {1});
  const auto report = check_cocycle_identity(f, exhaustive_triples(b, 1));
  EXPECT_GT(report.violations, 0u);
  ASSERT_FALSE(report.witnesses.empty());
  EXPECT_NE(report.witnesses.front().lhs, report.witnesses.front().rhs);
}

TEST(Coboundary, TwistedCoboundaryIsACocycle) {
  const auto b = ball2(4);
  const Coefficients c;
  const FiniteAction act = sign_action(b->group(), c);
  auto zero = std::make_shared<const ZeroCocycle>(b, c, act);
  std::mt19937_64 rng(8);
  const auto adjusted = std::make_shared<const CoboundaryAdjusted>(zero, random_function(*b, c, 5, rng));
  EXPECT_TRUE(check_cocycle_identity(*adjusted, exhaustive_triples(*b, 1)).passed());
  EXPECT_TRUE(check_cocycle_identity(*adjusted, random_triples(*b, 1, 2000, rng)).passed());
  // Ignoring the action breaks the identity for a generic u.
  auto untwisted = std::make_shared<const ZeroCocycle>(b, c, FiniteAction::trivial(b->group(), c));
  std::mt19937_64 rng2(8);
  const CoboundaryAdjusted plain(untwisted, random_function(*b, c, 5, rng2));
  const TableCocycle wrong_action = [&] {
    TableCocycle t(b, c, act);
    for (ElementId g1 : b->elements_up_to(2))
      for (ElementId g2 : b->elements_up_to(2)) t.set(g1, g2, *plain.value(g1, g2), "test");
    return t;
  }();
  EXPECT_FALSE(check_cocycle_identity(wrong_action, exhaustive_triples(*b, 1)).passed());
}

TEST(WeakBoundedness, SectionValuesAreBounded) {
  const auto s = section(5);
  const auto report = weak_boundedness_report(*s, 4);
  EXPECT_EQ(report.entries.size(), 8u);
  EXPECT_LE(report.max_abs, 3);
  const ZeroCocycle zero(ball2(5), Coefficients(), FiniteAction::trivial(ball2(5)->group(), Coefficients()));
  for (Letter x = 0; x < 8; ++x) EXPECT_EQ(right_values(zero, x, 4), std::vector<Coeff>{Coeff{0}});
}

TEST(LevelSets, PeelingMatchesDirectEvaluation) {
  const auto s = section(6);
  const auto& b = s->ball();
  for (const char* h : {"a1", "a1 b1", "b2 A1 b1"}) {
    const ElementId e = b.element(b.group().parse(h));
    EXPECT_EQ(level_sets_general(*s, e, 4), level_sets_direct(*s, e, 4)) << h;
  }
  EXPECT_THROW(level_sets_general(*s, b.element(b.group().parse("a1 b1")), 1), CocycleError);
}

TEST(LevelSets, MachinesMatchTheBall) {
  const auto s = section(6);
  const auto& b = s->ball();
  for (Letter x : {0, 5}) {
    const auto m = build_level_set_machines(*s, acceptor2(), x, 5);
    EXPECT_EQ(m.unclassified_states, 0u);
    EXPECT_EQ(m.conflicting_states, 0u);
    EXPECT_TRUE(m.tuples.consistent());
    for (const auto& [value, dfa] : m.dfas) {
      std::vector<ElementId> level;
      for (ElementId g : right_domain(b, x, 5))
        if (s->value(g, b.neighbor(b.identity(), x)) == value) level.push_back(g);
      EXPECT_TRUE(dfa_matches_elements(dfa, b, level, 4));
    }
  }
}

TEST(Transfer, TrivialSubgroupGivesTheBase) {
  const auto s = section(4);
  const TransferCocycle t(s, std::make_shared<const CosetStructure>(CosetStructure::trivial(s->ball_ptr())));
  for (ElementId g1 : s->ball().elements_up_to(1))
    for (ElementId g2 : s->ball().elements_up_to(1)) EXPECT_EQ(t.value(g1, g2), s->value(g1, g2));
}

TEST(Transfer, IndexTwoIsACocycle) {
  const auto s = section(6);
  const auto cosets = std::make_shared<const CosetStructure>(CosetStructure::index_two(s->ball_ptr(), {0}));
  EXPECT_EQ(cosets->index(), 2);
  EXPECT_TRUE(cosets->in_subgroup(s->ball().element(s->ball().group().parse("b1 a1 a1"))));
  EXPECT_FALSE(cosets->in_subgroup(s->ball().element(s->ball().group().parse("a1"))));
  const TransferCocycle t(s, cosets);
  const auto report = check_cocycle_identity(t, exhaustive_triples(s->ball(), 1));
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.violations, 0u);
}

TEST(Transfer, TwistedCoboundaryTransfersToACocycle) {
  const auto b = ball2(5);
  const Coefficients c;
  auto zero = std::make_shared<const ZeroCocycle>(b, c, sign_action(b->group(), c));
  std::mt19937_64 rng(3);
  auto adjusted = std::make_shared<const CoboundaryAdjusted>(zero, random_function(*b, c, 4, rng));
  const auto cosets = std::make_shared<const CosetStructure>(CosetStructure::index_two(b, {2}));
  const TransferCocycle t(adjusted, cosets);
  const auto report = check_cocycle_identity(t, exhaustive_triples(*b, 1));
  EXPECT_TRUE(report.passed());
}

TEST(Table, TabulateAndLookup) {
  const auto s = section(3);
  std::vector<std::pair<ElementId, ElementId>> pairs{{1, 2}, {3, 4}};
  const TableCocycle t = tabulate(*s, pairs);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.value(1, 2), s->value(1, 2));
  EXPECT_FALSE(t.value(2, 1));
}
