#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "regcocycle/io.hpp"

using namespace regcocycle;
using regcocycle::testing::ball2;

TEST(BallJson, RoundTrip) {
  const auto b = ball2(3);
  const auto j = ball_to_json(*b);
  EXPECT_EQ(j["spheres"], nlohmann::json::array({1, 8, 56, 392}));
  const CayleyBall copy = ball_from_json(nlohmann::json::parse(j.dump()));
  ASSERT_EQ(copy.size(), b->size());
  for (ElementId e = 0; e < static_cast<ElementId>(b->size()); ++e) {
    ASSERT_EQ(copy.word(e), b->word(e));
    for (Letter x = 0; x < 8; ++x) ASSERT_EQ(copy.neighbor(e, x), b->neighbor(e, x));
  }
  nlohmann::json broken = j;
  broken.erase("adjacency");
  EXPECT_THROW(ball_from_json(broken), FormatError);
}

TEST(BallDot, OneNodePerElement) {
  const std::string dot = ball_to_dot(*ball2(2));
  std::size_t nodes = 0, edges = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find("->") != std::string::npos)
      ++edges;
    else if (line.find("[label=") != std::string::npos)
      ++nodes;
  }
  EXPECT_EQ(nodes, 65u);
  // One edge g -> g x per generator a_i, b_i whenever g x is in the ball.
  std::size_t expected = 0;
  const auto b = ball2(2);
  for (ElementId e = 0; e < 65; ++e)
    for (Letter x = 0; x < 8; x += 2) expected += b->neighbor(e, x) != kNone;
  EXPECT_EQ(edges, expected);
}

TEST(CocycleJsonl, RoundTrip) {
  const auto b = ball2(3);
  const auto s = std::make_shared<const SectionCocycle>(b);
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (ElementId g1 : b->elements_up_to(2))
    for (ElementId g2 : b->elements_up_to(1)) pairs.emplace_back(g1, g2);
  const TableCocycle t = tabulate(*s, pairs);
  std::stringstream io;
  write_cocycle_jsonl(io, t);
  const TableCocycle back = read_cocycle_jsonl(io, b, s->coefficients(), s->action());
  EXPECT_EQ(back.size(), t.size());
  for (const auto& [g1, g2] : pairs) EXPECT_EQ(back.value(g1, g2), s->value(g1, g2));
  std::istringstream bad("{\"g1\": \"a1\"}\n");
  EXPECT_THROW(read_cocycle_jsonl(bad, b, s->coefficients(), s->action()), FormatError);
}

TEST(ExtJson, RoundTrip) {
  const Extension ext(std::make_shared<const SectionCocycle>(ball2(3)));
  const ExtElement p{ext.ball().element(ext.ball().group().parse("a1 B2")), {-7}};
  EXPECT_EQ(ext_from_json(ext, ext_to_json(ext, p)), p);
  EXPECT_THROW(ext_from_json(ext, nlohmann::json{{"base", "a1"}}), FormatError);
}

TEST(InputFiles, ActionAndSubgroup) {
  const SurfaceGroup g(2);
  const auto action = parse_action(nlohmann::json::parse(R"({"b1": [[-1]]})"), g, 1);
  ASSERT_EQ(action.size(), 4u);
  EXPECT_EQ(action[1](0, 0), -1);
  EXPECT_EQ(action[0](0, 0), 1);
  EXPECT_THROW(parse_action(nlohmann::json::parse(R"({"A1": [[1]]})"), g, 1), FormatError);
  EXPECT_THROW(parse_action(nlohmann::json::parse(R"({"a1": [[1, 0]]})"), g, 1), FormatError);
  const auto sub = parse_subgroup(nlohmann::json::parse(R"({"a2": [1, 2, 0]})"), g);
  ASSERT_EQ(sub.size(), 4u);
  EXPECT_EQ(sub[2], (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(sub[0], (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(parse_subgroup(nlohmann::json::parse(R"({"a1": [1, 0], "b1": [0]})"), g), FormatError);
}

TEST(Automata, AcceptorTextRoundTrip) {
  const auto& acc = regcocycle::testing::acceptor2();
  EXPECT_EQ(fsa::from_text(fsa::to_text(acc.dfa)), acc.dfa);
}
