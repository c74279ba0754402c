#ifndef REGCOCYCLE_FSA_HPP
#define REGCOCYCLE_FSA_HPP

// Finite automata over small labelled alphabets: total DFAs with an
// explicit sink, epsilon-NFAs, synchronous/asynchronous two-tape
// comparators and the product constructions built on top of them.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace regcocycle::fsa {

using Symbol = std::int32_t;
using StateId = std::int32_t;
using SymbolWord = std::vector<Symbol>;

inline constexpr Symbol kEpsilon = -1;

class AutomatonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ordered, named symbol set. Symbol i is `name(i)`; the order is the
/// order used for canonical numbering and shortlex enumeration.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(static_cast<std::size_t>(s)); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(const std::string& name) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
};

/// Union preserving the order of `a`, then new symbols of `b` in order.
Alphabet alphabet_union(const Alphabet& a, const Alphabet& b);

/// Total deterministic automaton. Immutable once constructed; the
/// constructor rejects partial or out-of-range transition tables.
class Dfa {
 public:
  Dfa() = default;
  Dfa(Alphabet alphabet, StateId start, std::vector<StateId> transitions,
      std::vector<char> accepting);

  static Dfa empty_language(const Alphabet& alphabet);
  static Dfa universal(const Alphabet& alphabet);
  /// Accepts exactly the given words (a trie with a sink).
  static Dfa from_words(const Alphabet& alphabet, std::span<const SymbolWord> words);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_symbols() const { return alphabet_.size(); }
  StateId num_states() const { return static_cast<StateId>(accepting_.size()); }
  StateId start() const { return start_; }
  bool accepting(StateId s) const { return accepting_[static_cast<std::size_t>(s)] != 0; }
  StateId next(StateId s, Symbol a) const {
    return delta_[static_cast<std::size_t>(s) * num_symbols() + static_cast<std::size_t>(a)];
  }
  const std::vector<StateId>& transitions() const { return delta_; }
  const std::vector<char>& accept_flags() const { return accepting_; }

  StateId run(std::span<const Symbol> word) const;
  bool accepts(std::span<const Symbol> word) const { return accepting(run(word)); }

  /// States from which some accepting state is reachable.
  std::vector<char> live_states() const;

  /// Accepted words of length <= max_length in shortlex order.
  std::vector<SymbolWord> enumerate(std::size_t max_length) const;

  bool operator==(const Dfa& other) const;

 private:
  Alphabet alphabet_;
  StateId start_ = 0;
  std::vector<StateId> delta_;
  std::vector<char> accepting_;
};

/// Epsilon-NFA with multiple start states. Partial transitions allowed.
class Nfa {
 public:
  struct Edge {
    Symbol symbol;  // kEpsilon for an empty move
    StateId to;
  };

  Nfa() = default;
  explicit Nfa(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  StateId add_state(bool accepting = false);
  void add_edge(StateId from, Symbol symbol, StateId to);
  void add_start(StateId s);
  void set_accepting(StateId s, bool value = true);

  const Alphabet& alphabet() const { return alphabet_; }
  StateId num_states() const { return static_cast<StateId>(edges_.size()); }
  const std::vector<Edge>& edges(StateId s) const { return edges_[static_cast<std::size_t>(s)]; }
  const std::vector<StateId>& starts() const { return starts_; }
  bool accepting(StateId s) const { return accepting_[static_cast<std::size_t>(s)] != 0; }

  bool accepts(std::span<const Symbol> word) const;

 private:
  Alphabet alphabet_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<char> accepting_;
  std::vector<StateId> starts_;
};

enum class TapeMode { Synchronous, Asynchronous };
enum class Tape { First = 1, Second = 2 };

/// Two-tape automaton realised as a DFA over the padded pair alphabet
/// (X ∪ {pad})² \ {(pad, pad)}. Pair (a, b) has index a*(k+1)+b with
/// pad = k; the excluded (pad, pad) would be the last index.
class TwoTapeAutomaton {
 public:
  TwoTapeAutomaton(Alphabet base, Dfa pair_dfa, TapeMode mode);

  /// Pair alphabet with names "(a,b)" and "-" for the pad.
  static Alphabet pair_alphabet(const Alphabet& base);
  static Symbol pad(const Alphabet& base) { return static_cast<Symbol>(base.size()); }
  static Symbol pair_symbol(const Alphabet& base, Symbol first, Symbol second);
  static std::pair<Symbol, Symbol> split_pair(const Alphabet& base, Symbol pair);

  const Alphabet& base() const { return base_; }
  const Dfa& dfa() const { return dfa_; }
  TapeMode mode() const { return mode_; }
  Symbol pad() const { return pad(base_); }

  /// Runs the synchronously padded pair (u, v).
  bool accepts(std::span<const Symbol> u, std::span<const Symbol> v) const;

 private:
  Alphabet base_;
  Dfa dfa_;
  TapeMode mode_;
};

/// Padded pair word for (u, v): the shorter tape is padded at the end.
SymbolWord pad_pair(const Alphabet& base, std::span<const Symbol> u, std::span<const Symbol> v);

Dfa determinize(const Nfa& nfa);
/// Subset construction that also reports the (sorted) NFA state set behind
/// every DFA state.
Dfa determinize(const Nfa& nfa, std::vector<std::vector<StateId>>* subsets);
Dfa minimize(const Dfa& dfa);
/// Drops unreachable states and renumbers breadth-first from the start.
Dfa canonical_numbering(const Dfa& dfa);

Dfa complement(const Dfa& a);
Dfa intersect(const Dfa& a, const Dfa& b);
Dfa unite(const Dfa& a, const Dfa& b);
Dfa difference(const Dfa& a, const Dfa& b);

/// Accepts {uv : u ∈ L(a), v ∈ L(b)} over the union alphabet.
Nfa concatenate(const Dfa& a, const Dfa& b);
/// Language of a DFA seen as an NFA (with a possibly larger alphabet).
Nfa to_nfa(const Dfa& a, const Alphabet& alphabet);
Nfa to_nfa(const Dfa& a);

/// Projection of the pair language onto one tape, pads dropped.
Nfa project(const TwoTapeAutomaton& t, Tape tape);

/// Lazily explores the reachable part of a product automaton whose
/// states are arbitrary hashable keys. `step` returns nullopt for the
/// dead state. Produces a total DFA (the dead state is the sink, state 0);
/// `keys_out` receives the key of state i + 1 at index i.
template <typename Key, typename Hash>
Dfa build_reachable(const Alphabet& alphabet, const Key& start,
                    const std::function<std::optional<Key>(const Key&, Symbol)>& step,
                    const std::function<bool(const Key&)>& accept, std::size_t state_limit,
                    std::vector<Key>* keys_out = nullptr);

// ---------------------------------------------------------------------
// Lifted-language product: word acceptor × level machines over Y.

struct LevelMachine {
  Symbol letter;    // generator x (symbol of the word acceptor's alphabet)
  Symbol y_symbol;  // Y-symbol naming s(x)ι(-a)
  Dfa dfa;          // accepts {w ∈ L : σ(w, x) = a}
};

enum class ProductMode { Reachable, Full };

/// DFA over `y_alphabet` accepting L' = {v' : v ∈ L}. In Full mode every
/// tuple of the cartesian product is a state (plus the dead state);
/// Reachable mode keeps only states reachable from the start.
/// Throws AutomatonError when, at a reachable state whose first coordinate
/// accepts, the level machines for some letter do not single out exactly
/// one coefficient.
Dfa prop22_product(const Dfa& word_acceptor, std::span<const LevelMachine> machines,
                   const Alphabet& y_alphabet, ProductMode mode = ProductMode::Reachable,
                   std::size_t state_limit = 2'000'000);

// ---------------------------------------------------------------------
// Fellow travelling.

/// Distance between the i-th point of the first path and the j-th point
/// of the second path of pair `pair`; nullopt when unknown (outside the
/// metric's ball).
using PathMetric = std::function<std::optional<int>(std::size_t pair, std::size_t i, std::size_t j)>;

struct FellowTravellerReport {
  int delta = 0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t worst_pair = 0;
  std::vector<std::size_t> skipped_pairs;
};

/// `lengths[p]` holds the lengths of the two words of pair p. Synchronous
/// mode measures d(u(t), v(t)); asynchronous mode minimises the maximum
/// distance over monotone lattice paths from (0,0) to (|u|,|v|). A pair
/// with an unknown synchronous distance is skipped; in asynchronous mode
/// unknown cells are treated as impassable.
FellowTravellerReport fellow_traveller_check(std::span<const std::pair<std::size_t, std::size_t>> lengths,
                                             const PathMetric& metric, TapeMode mode);

// ---------------------------------------------------------------------
// Exchange formats.

/// Text format: `states N`, `alphabet s1 s2 ...`, `start i`,
/// `accept i j ...`, then one `from<TAB>label<TAB>to` line per transition.
std::string to_text(const Dfa& dfa);
Dfa from_text(const std::string& text);
std::string to_dot(const Dfa& dfa, const std::string& name = "fsa", bool hide_sink = true);

}  // namespace regcocycle::fsa

#include "regcocycle/fsa_product.ipp"

#endif  // REGCOCYCLE_FSA_HPP
