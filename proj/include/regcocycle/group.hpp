#ifndef REGCOCYCLE_GROUP_HPP
#define REGCOCYCLE_GROUP_HPP

// Closed orientable surface groups of genus g >= 2 with the presentation
// <a1, b1, ..., ag, bg | [a1,b1]...[ag,bg]>, words over the 4g letters and
// Dehn's algorithm.
//
// Letter indices follow the alphabet order a1 < A1 < b1 < B1 < a2 < ...
// (uppercase = inverse), so letter 4(i-1) + 2*(is_b) + (inverse) and the
// inverse of letter x is x ^ 1.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "regcocycle/fsa.hpp"

namespace regcocycle {

using Letter = fsa::Symbol;
using Word = std::vector<Letter>;

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Letter inverse_letter(Letter x) { return x ^ 1; }

Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);
/// Length first, then lexicographic in letter order.
bool shortlex_less(const Word& u, const Word& v);

/// One relator application recorded by Dehn's algorithm: the conjugate
/// c * r^sign * c^-1 of the relator.
struct DehnStep {
  Word conjugator;
  int sign = 0;
};

struct DehnResult {
  Word reduced;
  std::vector<DehnStep> trace;
  /// Signed relator count N = sum of signs.
  int relator_count() const;
};

class SurfaceGroup {
 public:
  explicit SurfaceGroup(int genus);

  int genus() const { return genus_; }
  int num_letters() const { return 4 * genus_; }
  /// Letter for a_i (is_b = false) or b_i, i in [1, genus].
  Letter letter(int i, bool is_b, bool inverted = false) const;
  std::string letter_name(Letter x) const;
  fsa::Alphabet alphabet() const;

  /// "a1 B1 a2"; the empty word is "".
  std::string format(const Word& w) const;
  /// Accepts whitespace-separated letters, or a concatenation like "a1B1a2".
  Word parse(const std::string& text) const;

  /// r = a1 b1 A1 B1 ... ag bg Ag Bg.
  const Word& relator() const { return relator_; }

  /// Dehn's algorithm. `w` equals (in the free group) the product of the
  /// trace conjugates followed by `reduced`; `reduced` is empty iff w = 1.
  DehnResult dehn_reduce(const Word& w) const;
  Word dehn_word(const Word& w) const;
  bool is_trivial(const Word& w) const;
  bool equal(const Word& u, const Word& v) const;

  void check_word(const Word& w) const;

 private:
  int genus_;
  Word relator_;
  // pos_[e][x]: index of letter x in r (e = 0) or in r^-1 (e = 1).
  std::vector<int> pos_[2];
  Word rel_[2];
};

}  // namespace regcocycle

#endif  // REGCOCYCLE_GROUP_HPP
