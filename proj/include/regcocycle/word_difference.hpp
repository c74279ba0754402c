#ifndef REGCOCYCLE_WORD_DIFFERENCE_HPP
#define REGCOCYCLE_WORD_DIFFERENCE_HPP

// Word differences of fellow-travelling pairs of words, and the automata
// synthesized from them: comparators, the shortlex word acceptor and the
// right-multiplier classifiers used for level sets.
//
// For a pair (u, v) read synchronously with initial offset d0, the word
// difference after t letters is u(t)^-1 d0 v(t), and reading the pair of
// letters (a, b) moves a difference d to a^-1 d b (a pad acts as 1).

#include <map>
#include <vector>

#include "regcocycle/ball.hpp"
#include "regcocycle/fsa.hpp"

namespace regcocycle {

enum class PairSource {
  Diagonal,         // (u, u)
  RightMultiplier,  // (u, w) with w = u x
  LeftMultiplier,   // (v, w) with w = x v, initial offset x^-1
};

/// Left multiplication a * d by a letter, inside the ball.
std::optional<ElementId> left_multiply(const CayleyBall& ball, Letter a, ElementId d);

/// Differences along the padded pair (p, q) starting from d0. Returns
/// false when a difference leaves the ball.
bool pair_differences(const CayleyBall& ball, const Word& p, const Word& q, ElementId d0,
                      std::vector<ElementId>& out);

struct DifferenceData {
  std::vector<ElementId> differences;  // sorted, unique
  int max_length = 0;                  // largest |d|: the empirical fellow-traveller constant
  std::size_t pairs = 0;
};

/// Differences of the source pairs whose first word has length at most
/// data_radius - 1, so that every word involved lies in ball(data_radius).
DifferenceData collect_differences(const CayleyBall& ball, PairSource source, Letter x, int data_radius);

/// Synchronous comparator accepting the padded pairs whose differences
/// stay in `differences`, starting at d0 and ending at `accept`.
fsa::TwoTapeAutomaton difference_comparator(const CayleyBall& ball, const std::vector<ElementId>& differences,
                                            ElementId d0, ElementId accept);

struct WordDifferenceMachine {
  PairSource source = PairSource::Diagonal;
  Letter letter = 0;
  DifferenceData data;
  fsa::TwoTapeAutomaton comparator;
  /// Differences observed at radius R-1 and R coincide.
  bool stabilized = false;
};

WordDifferenceMachine build_word_difference_machine(const CayleyBall& ball, PairSource source, Letter x = 0);

// ---------------------------------------------------------------------
// Shortlex word acceptor.

struct WordAcceptor {
  fsa::Dfa dfa;  // minimized, over the group alphabet
  DifferenceData data;
  int data_radius = 0;
  /// Reduction differences at data_radius - 1 and data_radius coincide.
  bool stabilized = false;
};

/// Differences of the pairs (u x, canonical(u x)) with u x not canonical.
DifferenceData reduction_differences(const CayleyBall& ball, int data_radius);

/// Complement of the words having a prefix with a shortlex-smaller equal
/// word detectable through `differences`. Always contains every canonical
/// word; equals the canonical language once the differences are complete.
fsa::Dfa shortlex_acceptor(const CayleyBall& ball, const std::vector<ElementId>& differences);

WordAcceptor build_word_acceptor(const CayleyBall& ball, int data_radius);

/// Accepted words of length <= radius are exactly the ball's canonical words.
bool acceptor_matches_ball(const fsa::Dfa& acceptor, const CayleyBall& ball, int radius);

/// Rewrites w into the acceptor's language by repeatedly replacing the
/// shortest rejected prefix with the smaller equal word that witnesses the
/// rejection. Works for words of any length; the result equals w in the group.
Word shortlex_reduce(const CayleyBall& ball, const WordAcceptor& acceptor, Word w);

// ---------------------------------------------------------------------
// Right-multiplier classifier.

/// Encodes (first(u), last(u), first(w), last(w)); the empty word uses
/// the sentinel 4g in place of a letter.
struct EndTuple {
  int first1, last1, first2, last2;
  auto operator<=>(const EndTuple&) const = default;
};

EndTuple end_tuple(const Word& u, const Word& w, int num_letters);

struct MultiplierClassifier {
  Letter letter = 0;
  fsa::Dfa dfa;  // over the group alphabet
  /// For each state, the end tuples of the accepted multiplier runs
  /// (u, w) with w = u x, where u is the word read. Empty unless u is
  /// accepted by the word acceptor.
  std::vector<std::vector<EndTuple>> tuples;
  /// Every accepted u has a multiplier partner: the differences suffice
  /// for right multiplication by x on the whole language, not just the ball.
  bool complete = false;
  /// Shortlex-least accepted word without a partner, when incomplete.
  std::optional<Word> orphan;
  std::vector<ElementId> differences;
  /// Pairs added by completion beyond the ball data.
  int completion_pairs = 0;
};

MultiplierClassifier build_multiplier_classifier(const CayleyBall& ball, const WordAcceptor& acceptor,
                                                 const std::vector<ElementId>& right_differences, Letter x,
                                                 std::size_t state_limit = 3'000'000);

/// Starts from the differences of the ball pairs (u, u x) with |u| < data_radius
/// and adds the differences of (u, shortlex_reduce(u x)) for orphans u
/// until the classifier is complete or `max_rounds` pairs were added.
MultiplierClassifier build_complete_classifier(const CayleyBall& ball, const WordAcceptor& acceptor, Letter x,
                                               int data_radius, int max_rounds = 64);

}  // namespace regcocycle

#endif  // REGCOCYCLE_WORD_DIFFERENCE_HPP
