#ifndef REGCOCYCLE_EXTENSION_HPP
#define REGCOCYCLE_EXTENSION_HPP

// The extension E of G by A defined by a cocycle σ, with elements
// s(g)ι(a) written (g, a) and the law
//   (g1, a1)(g2, a2) = (g1 g2, a1^g2 + a2 + σ(g1, g2)).
// On top of it: the finite alphabet Y of lifted generators, the lifted
// language L' ⊂ Y*, a normal form language L_A for A and M = L' L_A.

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "regcocycle/cocycle.hpp"

namespace regcocycle {

struct ExtElement {
  ElementId base = 0;
  Coeff fiber;
  auto operator<=>(const ExtElement&) const = default;
};

class Extension {
 public:
  explicit Extension(std::shared_ptr<const Cocycle> sigma);

  const Cocycle& cocycle() const { return *sigma_; }
  const CayleyBall& ball() const { return sigma_->ball(); }
  const Coefficients& coefficients() const { return sigma_->coefficients(); }

  ExtElement identity() const { return {ball().identity(), coefficients().zero()}; }
  ExtElement section(ElementId g) const { return {g, coefficients().zero()}; }
  ExtElement fiber(const Coeff& a) const { return {ball().identity(), coefficients().normalize(a)}; }

  /// Throws OutOfBall when g1 g2 or σ(g1, g2) is not available in the ball.
  ExtElement mul(const ExtElement& p, const ExtElement& q) const;
  /// (g^-1, -a^{g^-1} - σ(g, g^-1)).
  ExtElement inverse(const ExtElement& p) const;
  ExtElement product(const std::vector<ExtElement>& factors) const;
  ExtElement section_word(const Word& w) const;  // product of the s(x) along w

  std::string format(const ExtElement& p) const;

 private:
  std::shared_ptr<const Cocycle> sigma_;
};

/// Product of s(x) along the relator; (1, 8g(g-1)) for the section cocycle.
ExtElement relator_product(const Extension& ext);

struct CentralityReport {
  bool central = true;
  std::size_t checked = 0;
  /// (1, a) and (g, 0) that do not commute.
  std::optional<std::pair<ExtElement, ExtElement>> witness;
};

/// Tests (1, ±e_i) against every (g, 0) with |g| <= radius.
CentralityReport centrality_check(const Extension& ext, int radius);

// ---------------------------------------------------------------------
// Y alphabet and the lifted language.

struct YSymbol {
  Letter letter = 0;
  Coeff offset;  // the symbol is s(x)ι(offset)
  ExtElement value;
};

class YAlphabet {
 public:
  /// Symbols s(x)ι(-a) for every letter x and every value a in `values[x]`,
  /// closed under inversion. Names look like "a1{-3}".
  YAlphabet(const Extension& ext, const std::vector<std::vector<Coeff>>& values);

  const fsa::Alphabet& alphabet() const { return alphabet_; }
  const std::vector<YSymbol>& symbols() const { return symbols_; }
  const YSymbol& symbol(fsa::Symbol y) const { return symbols_.at(static_cast<std::size_t>(y)); }
  std::size_t size() const { return symbols_.size(); }
  std::optional<fsa::Symbol> find(Letter x, const Coeff& offset) const;
  /// Every inverse of a symbol value is again a symbol value.
  bool symmetric(const Extension& ext) const;

 private:
  std::vector<YSymbol> symbols_;
  std::map<std::pair<Letter, Coeff>, fsa::Symbol> index_;
  fsa::Alphabet alphabet_;
  Coefficients coeffs_;
};

/// v' for a word v: the symbol for x_j is s(x_j)ι(-σ(x_1..x_{j-1}, x_j)).
/// Throws CocycleError when a prefix value or symbol is missing.
fsa::SymbolWord lift_word(const Extension& ext, const YAlphabet& y, const Word& v);
/// Same, starting from s(g) instead of the identity.
fsa::SymbolWord lift_word_from(const Extension& ext, const YAlphabet& y, ElementId g, const Word& v);

/// Level machines {w ∈ L : σ(w, x) = a} wired to the Y symbols s(x)ι(-a).
std::vector<fsa::LevelMachine> level_machines(const std::vector<LevelSetMachines>& machines, const YAlphabet& y);

/// Minimized DFA for L' from the word acceptor and the level-set machines.
fsa::Dfa lifted_language(const fsa::Dfa& word_acceptor, const std::vector<LevelSetMachines>& machines,
                         const YAlphabet& y, fsa::ProductMode mode = fsa::ProductMode::Reachable);

// ---------------------------------------------------------------------
// Fiber language and M = L' L_A.

/// Sign-magnitude normal forms over Z = {z_i, Z_i} (free coordinates) and
/// {t_j, T_j} (torsion coordinates): coordinates in order, each written as
/// z^k or Z^k, torsion residues as t^k with 0 <= k < m.
class FiberLanguage {
 public:
  explicit FiberLanguage(const Coefficients& coeffs);

  const fsa::Alphabet& alphabet() const { return alphabet_; }
  const fsa::Dfa& dfa() const { return dfa_; }
  fsa::SymbolWord normal_form(const Coeff& a) const;
  Coeff evaluate(const fsa::SymbolWord& w) const;
  /// Length of the normal form.
  std::size_t norm(const Coeff& a) const;
  /// Coordinate and sign carried by a symbol.
  std::pair<std::size_t, int> generator(fsa::Symbol z) const;

 private:
  Coefficients coeffs_;
  fsa::Alphabet alphabet_;
  fsa::Dfa dfa_;
};

/// Evaluates words over Y ∪ Z in E.
class MEvaluator {
 public:
  MEvaluator(const Extension& ext, const YAlphabet& y, const FiberLanguage& fiber);
  const fsa::Alphabet& alphabet() const { return alphabet_; }
  ExtElement symbol_value(fsa::Symbol s) const { return values_.at(static_cast<std::size_t>(s)); }
  ExtElement evaluate(const fsa::SymbolWord& w) const;
  /// Every symbol projects to a generator or to 1, so d_E >= d_G.
  bool projection_is_short() const;

 private:
  const Extension* ext_;
  fsa::Alphabet alphabet_;
  std::vector<ExtElement> values_;
};

/// minimize(determinize(L' · L_A)) over the alphabet Y followed by Z.
fsa::Dfa build_m(const fsa::Dfa& lifted, const FiberLanguage& fiber);

struct MBijectionReport {
  std::size_t words = 0;
  std::size_t expected = 0;  // #{(g, a) : |g| + |a| <= length}
  std::size_t duplicates = 0;
  std::size_t outside = 0;  // images with |g| + |a| beyond the word length
  bool passed() const { return words == expected && duplicates == 0 && outside == 0; }
};

/// Enumerates M up to `length` and checks that evaluation is a bijection
/// onto {(g, a) : |g| + |a| <= length}. Needs ball radius >= length.
MBijectionReport check_m_bijection(const Extension& ext, const fsa::Dfa& m, const MEvaluator& eval,
                                   const FiberLanguage& fiber, int length);

// ---------------------------------------------------------------------
// Distances in E.

/// Upper bound for d_E(p, q): with p^-1 q = s(u)ι(c), the word
/// canonical(u)' followed by the normal form of c. Exact when c = 0.
std::optional<int> ext_distance_bound(const Extension& ext, const FiberLanguage& fiber, const ExtElement& p,
                                      const ExtElement& q);

struct SectionDistanceReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t mismatches = 0;
  std::optional<std::pair<ElementId, ElementId>> witness;
  bool passed() const { return mismatches == 0 && checked > 0; }
};

/// d_E(s(g), s(g')) = d_G(g, g') on random pairs: the lift of a geodesic
/// from g to g' is a Y-word of length d_G(g, g') from s(g) to s(g'), and
/// d_E >= d_G because every symbol projects to a generator or to 1.
SectionDistanceReport section_distance_check(const Extension& ext, const YAlphabet& y, const MEvaluator& eval,
                                             int radius, std::size_t count, std::mt19937_64& rng);

struct LiftedTravellerReport {
  int radius = 0;
  int k = 0;  // largest distance bound met
  std::size_t pairs = 0;
  std::size_t skipped = 0;
};

/// Pairs (y1 w1 y2, w2) with w1 = lift(g), |g| <= radius - 2, y1, y2 ∈ Y and
/// w2 the lift of π(y1 w1 y2); the synchronous distances are bounded by
/// ext_distance_bound.
LiftedTravellerReport lifted_fellow_traveller(const Extension& ext, const YAlphabet& y, const FiberLanguage& fiber,
                                              int radius);

}  // namespace regcocycle

#endif  // REGCOCYCLE_EXTENSION_HPP
