#ifndef REGCOCYCLE_TESTS_FIXTURES_HPP
#define REGCOCYCLE_TESTS_FIXTURES_HPP

// Balls are expensive enough to share across tests in one binary.

#include <memory>

#include "regcocycle/ball.hpp"
#include "regcocycle/word_difference.hpp"

namespace regcocycle::testing {

inline std::shared_ptr<const Surface> surface(int genus) {
  static std::shared_ptr<const Surface> g2 = std::make_shared<const Surface>(2);
  static std::shared_ptr<const Surface> g3 = std::make_shared<const Surface>(3);
  return genus == 2 ? g2 : genus == 3 ? g3 : std::make_shared<const Surface>(genus);
}

inline std::shared_ptr<const CayleyBall> ball2(int radius) {
  static std::shared_ptr<const CayleyBall> cache[8];
  auto& b = cache[radius];
  if (!b) b = std::make_shared<const CayleyBall>(CayleyBall::build(surface(2), radius));
  return b;
}

// Acceptor learned on ball(5) of genus 2, checked against ball(6).
inline const WordAcceptor& acceptor2() {
  static const WordAcceptor acc = build_word_acceptor(*ball2(6), 5);
  return acc;
}

}  // namespace regcocycle::testing

#endif  // REGCOCYCLE_TESTS_FIXTURES_HPP
