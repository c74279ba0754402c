#include "regcocycle/fsa.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace regcocycle::fsa {

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<StateId, StateId>& p) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.first)) << 32) |
                                      static_cast<std::uint32_t>(p.second));
  }
};

struct VectorHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (StateId s : v) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(s));
      h *= 1099511628211ull;
    }
    return h;
  }
};

void require_same_alphabet(const Dfa& a, const Dfa& b) {
  if (!(a.alphabet() == b.alphabet())) throw AutomatonError("alphabet mismatch");
}

enum class BoolOp { And, Or, Minus };

Dfa boolean_product(const Dfa& a, const Dfa& b, BoolOp op) {
  require_same_alphabet(a, b);
  using Key = std::pair<StateId, StateId>;
  std::function<std::optional<Key>(const Key&, Symbol)> step = [&](const Key& key, Symbol s) -> std::optional<Key> {
    return Key{a.next(key.first, s), b.next(key.second, s)};
  };
  std::function<bool(const Key&)> accept = [&](const Key& key) {
    const bool x = a.accepting(key.first);
    const bool y = b.accepting(key.second);
    switch (op) {
      case BoolOp::And: return x && y;
      case BoolOp::Or: return x || y;
      case BoolOp::Minus: return x && !y;
    }
    return false;
  };
  const auto limit = static_cast<std::size_t>(a.num_states()) * static_cast<std::size_t>(b.num_states()) + 2;
  return build_reachable<Key, PairHash>(a.alphabet(), Key{a.start(), b.start()}, step, accept, limit);
}

std::vector<StateId> epsilon_closure(const Nfa& nfa, std::vector<StateId> set) {
  std::vector<char> seen(static_cast<std::size_t>(nfa.num_states()), 0);
  std::vector<StateId> stack;
  for (StateId s : set) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = 1;
      stack.push_back(s);
    }
  }
  std::vector<StateId> out;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    out.push_back(s);
    for (const auto& e : nfa.edges(s)) {
      if (e.symbol == kEpsilon && !seen[static_cast<std::size_t>(e.to)]) {
        seen[static_cast<std::size_t>(e.to)] = 1;
        stack.push_back(e.to);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

}  // namespace

// ---------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!valid_name(names_[i])) throw AutomatonError("invalid symbol name '" + names_[i] + "'");
    if (!index_.emplace(names_[i], static_cast<Symbol>(i)).second)
      throw AutomatonError("duplicate symbol name '" + names_[i] + "'");
  }
}

std::optional<Symbol> Alphabet::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Alphabet alphabet_union(const Alphabet& a, const Alphabet& b) {
  std::vector<std::string> names = a.names();
  for (const auto& n : b.names())
    if (!a.find(n)) names.push_back(n);
  return Alphabet(std::move(names));
}

// ---------------------------------------------------------------------
// Dfa

Dfa::Dfa(Alphabet alphabet, StateId start, std::vector<StateId> transitions, std::vector<char> accepting)
    : alphabet_(std::move(alphabet)), start_(start), delta_(std::move(transitions)), accepting_(std::move(accepting)) {
  const auto n = accepting_.size();
  if (n == 0) throw AutomatonError("automaton must have at least one state");
  if (delta_.size() != n * alphabet_.size()) throw AutomatonError("transition table is not total");
  if (start_ < 0 || static_cast<std::size_t>(start_) >= n) throw AutomatonError("start state out of range");
  for (StateId t : delta_)
    if (t < 0 || static_cast<std::size_t>(t) >= n) throw AutomatonError("transition target out of range");
}

Dfa Dfa::empty_language(const Alphabet& alphabet) {
  return Dfa(alphabet, 0, std::vector<StateId>(alphabet.size(), 0), {0});
}

Dfa Dfa::universal(const Alphabet& alphabet) {
  return Dfa(alphabet, 0, std::vector<StateId>(alphabet.size(), 0), {1});
}

Dfa Dfa::from_words(const Alphabet& alphabet, std::span<const SymbolWord> words) {
  const auto k = alphabet.size();
  // state 0 = sink, state 1 = root
  std::vector<StateId> delta(2 * k, 0);
  std::vector<char> accepting{0, 0};
  for (const auto& w : words) {
    StateId s = 1;
    for (Symbol a : w) {
      if (a < 0 || static_cast<std::size_t>(a) >= k) throw AutomatonError("symbol out of range");
      auto& slot = delta[static_cast<std::size_t>(s) * k + static_cast<std::size_t>(a)];
      if (slot == 0) {
        slot = static_cast<StateId>(accepting.size());
        accepting.push_back(0);
        delta.insert(delta.end(), k, 0);
      }
      s = delta[static_cast<std::size_t>(s) * k + static_cast<std::size_t>(a)];
    }
    accepting[static_cast<std::size_t>(s)] = 1;
  }
  return Dfa(alphabet, 1, std::move(delta), std::move(accepting));
}

StateId Dfa::run(std::span<const Symbol> word) const {
  StateId s = start_;
  for (Symbol a : word) {
    if (a < 0 || static_cast<std::size_t>(a) >= num_symbols()) throw AutomatonError("symbol out of range");
    s = next(s, a);
  }
  return s;
}

std::vector<char> Dfa::live_states() const {
  const auto n = static_cast<std::size_t>(num_states());
  const auto k = num_symbols();
  std::vector<std::vector<StateId>> reverse(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < k; ++a) reverse[static_cast<std::size_t>(delta_[s * k + a])].push_back(static_cast<StateId>(s));
  std::vector<char> live(n, 0);
  std::vector<StateId> stack;
  for (std::size_t s = 0; s < n; ++s)
    if (accepting_[s]) {
      live[s] = 1;
      stack.push_back(static_cast<StateId>(s));
    }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[static_cast<std::size_t>(s)])
      if (!live[static_cast<std::size_t>(p)]) {
        live[static_cast<std::size_t>(p)] = 1;
        stack.push_back(p);
      }
  }
  return live;
}

std::vector<SymbolWord> Dfa::enumerate(std::size_t max_length) const {
  const auto live = live_states();
  std::vector<SymbolWord> out;
  std::vector<std::pair<StateId, SymbolWord>> level{{start_, {}}};
  for (std::size_t len = 0; len <= max_length && !level.empty(); ++len) {
    std::vector<std::pair<StateId, SymbolWord>> next_level;
    for (auto& [s, w] : level) {
      if (accepting(s)) out.push_back(w);
      if (len == max_length) continue;
      for (Symbol a = 0; a < static_cast<Symbol>(num_symbols()); ++a) {
        StateId t = next(s, a);
        if (!live[static_cast<std::size_t>(t)]) continue;
        SymbolWord v = w;
        v.push_back(a);
        next_level.emplace_back(t, std::move(v));
      }
    }
    level = std::move(next_level);
  }
  return out;
}

bool Dfa::operator==(const Dfa& other) const {
  return alphabet_ == other.alphabet_ && start_ == other.start_ && delta_ == other.delta_ &&
         accepting_ == other.accepting_;
}

// ---------------------------------------------------------------------
// Nfa

StateId Nfa::add_state(bool accepting) {
  edges_.emplace_back();
  accepting_.push_back(accepting ? 1 : 0);
  return static_cast<StateId>(edges_.size() - 1);
}

void Nfa::add_edge(StateId from, Symbol symbol, StateId to) {
  if (from < 0 || from >= num_states() || to < 0 || to >= num_states())
    throw AutomatonError("edge endpoint out of range");
  if (symbol != kEpsilon && (symbol < 0 || static_cast<std::size_t>(symbol) >= alphabet_.size()))
    throw AutomatonError("edge symbol out of range");
  edges_[static_cast<std::size_t>(from)].push_back({symbol, to});
}

void Nfa::add_start(StateId s) {
  if (s < 0 || s >= num_states()) throw AutomatonError("start state out of range");
  starts_.push_back(s);
}

void Nfa::set_accepting(StateId s, bool value) { accepting_.at(static_cast<std::size_t>(s)) = value ? 1 : 0; }

bool Nfa::accepts(std::span<const Symbol> word) const {
  auto current = epsilon_closure(*this, starts_);
  for (Symbol a : word) {
    std::vector<StateId> moved;
    for (StateId s : current)
      for (const auto& e : edges(s))
        if (e.symbol == a) moved.push_back(e.to);
    current = epsilon_closure(*this, std::move(moved));
    if (current.empty()) return false;
  }
  return std::any_of(current.begin(), current.end(), [&](StateId s) { return accepting(s); });
}

// ---------------------------------------------------------------------
// Two-tape automata

Alphabet TwoTapeAutomaton::pair_alphabet(const Alphabet& base) {
  const auto k = base.size();
  std::vector<std::string> names;
  names.reserve((k + 1) * (k + 1) - 1);
  auto nm = [&](std::size_t i) { return i == k ? std::string("-") : base.name(static_cast<Symbol>(i)); };
  for (std::size_t a = 0; a <= k; ++a)
    for (std::size_t b = 0; b <= k; ++b) {
      if (a == k && b == k) continue;
      names.push_back("(" + nm(a) + "," + nm(b) + ")");
    }
  return Alphabet(std::move(names));
}

Symbol TwoTapeAutomaton::pair_symbol(const Alphabet& base, Symbol first, Symbol second) {
  const auto k = static_cast<Symbol>(base.size());
  if (first < 0 || first > k || second < 0 || second > k) throw AutomatonError("pair component out of range");
  if (first == k && second == k) throw AutomatonError("(pad, pad) is not a pair symbol");
  return first * (k + 1) + second;
}

std::pair<Symbol, Symbol> TwoTapeAutomaton::split_pair(const Alphabet& base, Symbol pair) {
  const auto k = static_cast<Symbol>(base.size());
  return {pair / (k + 1), pair % (k + 1)};
}

TwoTapeAutomaton::TwoTapeAutomaton(Alphabet base, Dfa pair_dfa, TapeMode mode)
    : base_(std::move(base)), dfa_(std::move(pair_dfa)), mode_(mode) {
  if (!(dfa_.alphabet() == pair_alphabet(base_))) throw AutomatonError("two-tape automaton over wrong alphabet");
  if (mode_ != TapeMode::Synchronous) return;
  // Synchronous padding: after a pad on a tape, only pads may follow on
  // that tape along any path that can still accept.
  const auto live = dfa_.live_states();
  const auto k = static_cast<Symbol>(base_.size());
  const auto num_pairs = static_cast<Symbol>(dfa_.num_symbols());
  for (int tape = 0; tape < 2; ++tape) {
    std::vector<char> padded(static_cast<std::size_t>(dfa_.num_states()), 0);
    std::vector<StateId> stack;
    auto component = [&](Symbol p) {
      auto [a, b] = split_pair(base_, p);
      return tape == 0 ? a : b;
    };
    for (StateId s = 0; s < dfa_.num_states(); ++s)
      for (Symbol p = 0; p < num_pairs; ++p) {
        StateId t = dfa_.next(s, p);
        if (component(p) == k && live[static_cast<std::size_t>(t)] && !padded[static_cast<std::size_t>(t)]) {
          padded[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      for (Symbol p = 0; p < num_pairs; ++p) {
        StateId t = dfa_.next(s, p);
        if (!live[static_cast<std::size_t>(t)]) continue;
        if (component(p) != k)
          throw AutomatonError("synchronous two-tape automaton reads a letter after a pad");
        if (!padded[static_cast<std::size_t>(t)]) {
          padded[static_cast<std::size_t>(t)] = 1;
          stack.push_back(t);
        }
      }
    }
  }
}

SymbolWord pad_pair(const Alphabet& base, std::span<const Symbol> u, std::span<const Symbol> v) {
  const auto pad = TwoTapeAutomaton::pad(base);
  const auto n = std::max(u.size(), v.size());
  SymbolWord out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(TwoTapeAutomaton::pair_symbol(base, i < u.size() ? u[i] : pad, i < v.size() ? v[i] : pad));
  return out;
}

bool TwoTapeAutomaton::accepts(std::span<const Symbol> u, std::span<const Symbol> v) const {
  return dfa_.accepts(pad_pair(base_, u, v));
}

// ---------------------------------------------------------------------
// Determinisation and minimisation

Dfa determinize(const Nfa& nfa) { return determinize(nfa, nullptr); }

Dfa determinize(const Nfa& nfa, std::vector<std::vector<StateId>>* subsets) {
  const auto k = nfa.alphabet().size();
  std::unordered_map<std::vector<StateId>, StateId, VectorHash> ids;
  std::vector<std::vector<StateId>> sets;
  std::vector<StateId> delta;
  std::vector<char> accepting;

  auto intern = [&](std::vector<StateId> set) -> StateId {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    const auto id = static_cast<StateId>(sets.size());
    const bool acc = std::any_of(set.begin(), set.end(), [&](StateId s) { return nfa.accepting(s); });
    ids.emplace(set, id);
    sets.push_back(std::move(set));
    accepting.push_back(acc ? 1 : 0);
    delta.insert(delta.end(), k, 0);
    return id;
  };

  const StateId start = intern(epsilon_closure(nfa, nfa.starts()));
  std::vector<std::vector<StateId>> moved(k);
  for (std::size_t q = 0; q < sets.size(); ++q) {
    for (auto& m : moved) m.clear();
    for (StateId s : sets[q])
      for (const auto& e : nfa.edges(s))
        if (e.symbol != kEpsilon) moved[static_cast<std::size_t>(e.symbol)].push_back(e.to);
    for (std::size_t a = 0; a < k; ++a) {
      const StateId t = intern(epsilon_closure(nfa, moved[a]));
      delta[q * k + a] = t;
    }
  }
  if (subsets) *subsets = sets;
  return Dfa(nfa.alphabet(), start, std::move(delta), std::move(accepting));
}

Dfa canonical_numbering(const Dfa& dfa) {
  const auto k = dfa.num_symbols();
  std::vector<StateId> order;
  std::vector<StateId> renumber(static_cast<std::size_t>(dfa.num_states()), -1);
  renumber[static_cast<std::size_t>(dfa.start())] = 0;
  order.push_back(dfa.start());
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Symbol a = 0; a < static_cast<Symbol>(k); ++a) {
      StateId t = dfa.next(order[i], a);
      if (renumber[static_cast<std::size_t>(t)] < 0) {
        renumber[static_cast<std::size_t>(t)] = static_cast<StateId>(order.size());
        order.push_back(t);
      }
    }
  std::vector<StateId> delta(order.size() * k);
  std::vector<char> accepting(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    accepting[i] = dfa.accepting(order[i]) ? 1 : 0;
    for (std::size_t a = 0; a < k; ++a)
      delta[i * k + a] = renumber[static_cast<std::size_t>(dfa.next(order[i], static_cast<Symbol>(a)))];
  }
  return Dfa(dfa.alphabet(), 0, std::move(delta), std::move(accepting));
}

Dfa minimize(const Dfa& input) {
  const Dfa dfa = canonical_numbering(input);
  const auto n = static_cast<std::size_t>(dfa.num_states());
  const auto k = dfa.num_symbols();

  // Moore partition refinement.
  std::vector<StateId> cls(n);
  for (std::size_t s = 0; s < n; ++s) cls[s] = dfa.accepting(static_cast<StateId>(s)) ? 1 : 0;
  std::size_t num_classes = 0;
  {
    std::set<StateId> distinct(cls.begin(), cls.end());
    num_classes = distinct.size();
  }
  std::vector<StateId> signature(k + 1);
  for (;;) {
    std::unordered_map<std::vector<StateId>, StateId, VectorHash> sig_ids;
    std::vector<StateId> next_cls(n);
    for (std::size_t s = 0; s < n; ++s) {
      signature[0] = cls[s];
      for (std::size_t a = 0; a < k; ++a)
        signature[a + 1] = cls[static_cast<std::size_t>(dfa.next(static_cast<StateId>(s), static_cast<Symbol>(a)))];
      auto [it, inserted] = sig_ids.try_emplace(signature, static_cast<StateId>(sig_ids.size()));
      next_cls[s] = it->second;
    }
    const std::size_t next_count = sig_ids.size();
    cls = std::move(next_cls);
    if (next_count == num_classes) break;
    num_classes = next_count;
  }

  std::vector<StateId> delta(num_classes * k, -1);
  std::vector<char> accepting(num_classes, 0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto c = static_cast<std::size_t>(cls[s]);
    accepting[c] = dfa.accepting(static_cast<StateId>(s)) ? 1 : 0;
    for (std::size_t a = 0; a < k; ++a)
      delta[c * k + a] = cls[static_cast<std::size_t>(dfa.next(static_cast<StateId>(s), static_cast<Symbol>(a)))];
  }
  return canonical_numbering(Dfa(dfa.alphabet(), cls[static_cast<std::size_t>(dfa.start())], std::move(delta),
                                 std::move(accepting)));
}

// ---------------------------------------------------------------------
// Boolean operations

Dfa complement(const Dfa& a) {
  std::vector<char> acc = a.accept_flags();
  for (auto& f : acc) f = f ? 0 : 1;
  return Dfa(a.alphabet(), a.start(), a.transitions(), std::move(acc));
}

Dfa intersect(const Dfa& a, const Dfa& b) { return boolean_product(a, b, BoolOp::And); }
Dfa unite(const Dfa& a, const Dfa& b) { return boolean_product(a, b, BoolOp::Or); }
Dfa difference(const Dfa& a, const Dfa& b) { return boolean_product(a, b, BoolOp::Minus); }

// ---------------------------------------------------------------------
// NFA constructions

Nfa to_nfa(const Dfa& a, const Alphabet& alphabet) {
  Nfa out(alphabet);
  std::vector<Symbol> map(a.num_symbols());
  for (std::size_t s = 0; s < a.num_symbols(); ++s) {
    auto found = alphabet.find(a.alphabet().name(static_cast<Symbol>(s)));
    if (!found) throw AutomatonError("symbol missing from target alphabet");
    map[s] = *found;
  }
  for (StateId s = 0; s < a.num_states(); ++s) out.add_state(a.accepting(s));
  for (StateId s = 0; s < a.num_states(); ++s)
    for (std::size_t x = 0; x < a.num_symbols(); ++x) out.add_edge(s, map[x], a.next(s, static_cast<Symbol>(x)));
  out.add_start(a.start());
  return out;
}

Nfa to_nfa(const Dfa& a) { return to_nfa(a, a.alphabet()); }

Nfa concatenate(const Dfa& a, const Dfa& b) {
  const Alphabet alphabet = alphabet_union(a.alphabet(), b.alphabet());
  Nfa out(alphabet);
  auto symbol_map = [&](const Dfa& d) {
    std::vector<Symbol> map(d.num_symbols());
    for (std::size_t s = 0; s < d.num_symbols(); ++s) map[s] = *alphabet.find(d.alphabet().name(static_cast<Symbol>(s)));
    return map;
  };
  const auto map_a = symbol_map(a);
  const auto map_b = symbol_map(b);
  const StateId offset = a.num_states();
  for (StateId s = 0; s < a.num_states(); ++s) out.add_state(false);
  for (StateId s = 0; s < b.num_states(); ++s) out.add_state(b.accepting(s));
  for (StateId s = 0; s < a.num_states(); ++s) {
    for (std::size_t x = 0; x < a.num_symbols(); ++x) out.add_edge(s, map_a[x], a.next(s, static_cast<Symbol>(x)));
    if (a.accepting(s)) out.add_edge(s, kEpsilon, offset + b.start());
  }
  for (StateId s = 0; s < b.num_states(); ++s)
    for (std::size_t x = 0; x < b.num_symbols(); ++x)
      out.add_edge(offset + s, map_b[x], offset + b.next(s, static_cast<Symbol>(x)));
  out.add_start(a.start());
  return out;
}

Nfa project(const TwoTapeAutomaton& t, Tape tape) {
  const Dfa& d = t.dfa();
  Nfa out(t.base());
  for (StateId s = 0; s < d.num_states(); ++s) out.add_state(d.accepting(s));
  const Symbol pad = t.pad();
  // Skip edges into dead states to keep the projection small.
  const auto live = d.live_states();
  for (StateId s = 0; s < d.num_states(); ++s) {
    if (!live[static_cast<std::size_t>(s)]) continue;
    for (Symbol p = 0; p < static_cast<Symbol>(d.num_symbols()); ++p) {
      const StateId to = d.next(s, p);
      if (!live[static_cast<std::size_t>(to)]) continue;
      auto [a, b] = TwoTapeAutomaton::split_pair(t.base(), p);
      const Symbol c = tape == Tape::First ? a : b;
      out.add_edge(s, c == pad ? kEpsilon : c, to);
    }
  }
  out.add_start(d.start());
  return out;
}

// ---------------------------------------------------------------------
// Lifted-language product

Dfa prop22_product(const Dfa& word_acceptor, std::span<const LevelMachine> machines, const Alphabet& y_alphabet,
                   ProductMode mode, std::size_t state_limit) {
  const auto m = machines.size();
  std::vector<std::ptrdiff_t> machine_of(y_alphabet.size(), -1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& lm = machines[i];
    if (!(lm.dfa.alphabet() == word_acceptor.alphabet()))
      throw AutomatonError("level machine alphabet differs from the word acceptor's");
    if (lm.y_symbol < 0 || static_cast<std::size_t>(lm.y_symbol) >= y_alphabet.size())
      throw AutomatonError("level machine Y-symbol out of range");
    if (machine_of[static_cast<std::size_t>(lm.y_symbol)] >= 0)
      throw AutomatonError("two level machines share a Y-symbol");
    machine_of[static_cast<std::size_t>(lm.y_symbol)] = static_cast<std::ptrdiff_t>(i);
  }

  using Key = std::vector<StateId>;
  auto step = [&](const Key& key, Symbol y) -> std::optional<Key> {
    const auto mi = machine_of[static_cast<std::size_t>(y)];
    if (mi < 0) return std::nullopt;
    const auto& lm = machines[static_cast<std::size_t>(mi)];
    if (!lm.dfa.accepting(key[static_cast<std::size_t>(mi) + 1])) return std::nullopt;
    Key next(key.size());
    next[0] = word_acceptor.next(key[0], lm.letter);
    for (std::size_t i = 0; i < m; ++i) next[i + 1] = machines[i].dfa.next(key[i + 1], lm.letter);
    return next;
  };

  Key start(m + 1);
  start[0] = word_acceptor.start();
  for (std::size_t i = 0; i < m; ++i) start[i + 1] = machines[i].dfa.start();

  if (mode == ProductMode::Reachable) {
    std::function<std::optional<Key>(const Key&, Symbol)> step_fn = step;
    std::function<bool(const Key&)> accept = [&](const Key& key) {
      if (!word_acceptor.accepting(key[0])) return false;
      std::map<Symbol, int> hits;
      for (std::size_t i = 0; i < m; ++i) {
        hits.try_emplace(machines[i].letter, 0);
        if (machines[i].dfa.accepting(key[i + 1])) ++hits[machines[i].letter];
      }
      for (auto [letter, count] : hits)
        if (count != 1)
          throw AutomatonError("level machines for letter " + word_acceptor.alphabet().name(letter) +
                               " do not partition the language (" + std::to_string(count) + " accept)");
      return true;
    };
    return build_reachable<Key, VectorHash>(y_alphabet, start, step_fn, accept, state_limit);
  }

  // Full cartesian product: state id = 1 + mixed-radix index; 0 is the dead state.
  std::vector<std::size_t> radix(m + 1);
  radix[0] = static_cast<std::size_t>(word_acceptor.num_states());
  for (std::size_t i = 0; i < m; ++i) radix[i + 1] = static_cast<std::size_t>(machines[i].dfa.num_states());
  std::size_t total = 1;
  for (auto r : radix) {
    if (total > state_limit / r) throw AutomatonError("full product exceeds state limit");
    total *= r;
  }
  auto encode = [&](const Key& key) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i <= m; ++i) idx = idx * radix[i] + static_cast<std::size_t>(key[i]);
    return static_cast<StateId>(idx + 1);
  };
  const auto k = y_alphabet.size();
  std::vector<StateId> delta((total + 1) * k, 0);
  std::vector<char> accepting(total + 1, 0);
  Key key(m + 1);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t i = m + 1; i-- > 0;) {
      key[i] = static_cast<StateId>(rest % radix[i]);
      rest /= radix[i];
    }
    accepting[idx + 1] = word_acceptor.accepting(key[0]) ? 1 : 0;
    for (std::size_t y = 0; y < k; ++y) {
      auto next = step(key, static_cast<Symbol>(y));
      delta[(idx + 1) * k + y] = next ? encode(*next) : 0;
    }
  }
  return Dfa(y_alphabet, encode(start), std::move(delta), std::move(accepting));
}

// ---------------------------------------------------------------------
// Fellow travelling

FellowTravellerReport fellow_traveller_check(std::span<const std::pair<std::size_t, std::size_t>> lengths,
                                             const PathMetric& metric, TapeMode mode) {
  FellowTravellerReport report;
  constexpr int kInf = std::numeric_limits<int>::max();
  for (std::size_t p = 0; p < lengths.size(); ++p) {
    const auto [m, n] = lengths[p];
    int value = 0;
    bool skip = false;
    if (mode == TapeMode::Synchronous) {
      for (std::size_t t = 0; t <= std::max(m, n); ++t) {
        auto d = metric(p, std::min(t, m), std::min(t, n));
        if (!d) {
          skip = true;
          break;
        }
        value = std::max(value, *d);
      }
    } else {
      // Bottleneck shortest path over the grid with monotone moves.
      std::vector<int> best((m + 1) * (n + 1), kInf);
      for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = 0; j <= n; ++j) {
          int prev = kInf;
          if (i == 0 && j == 0) prev = 0;
          if (i > 0) prev = std::min(prev, best[(i - 1) * (n + 1) + j]);
          if (j > 0) prev = std::min(prev, best[i * (n + 1) + j - 1]);
          if (i > 0 && j > 0) prev = std::min(prev, best[(i - 1) * (n + 1) + j - 1]);
          if (prev == kInf) continue;
          auto d = metric(p, i, j);
          if (!d) continue;
          best[i * (n + 1) + j] = std::max(prev, *d);
        }
      value = best[m * (n + 1) + n];
      if (value == kInf) skip = true;
    }
    if (skip) {
      ++report.skipped;
      report.skipped_pairs.push_back(p);
      continue;
    }
    ++report.checked;
    if (value > report.delta || report.checked == 1) {
      if (value > report.delta) report.worst_pair = p;
      report.delta = std::max(report.delta, value);
    }
  }
  return report;
}

// ---------------------------------------------------------------------
// Exchange formats

std::string to_text(const Dfa& dfa) {
  std::ostringstream out;
  out << "states " << dfa.num_states() << "\n";
  out << "alphabet";
  for (const auto& n : dfa.alphabet().names()) out << ' ' << n;
  out << "\nstart " << dfa.start() << "\naccept";
  for (StateId s = 0; s < dfa.num_states(); ++s)
    if (dfa.accepting(s)) out << ' ' << s;
  out << "\n";
  for (StateId s = 0; s < dfa.num_states(); ++s)
    for (Symbol a = 0; a < static_cast<Symbol>(dfa.num_symbols()); ++a)
      out << s << '\t' << dfa.alphabet().name(a) << '\t' << dfa.next(s, a) << '\n';
  return out.str();
}

Dfa from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::optional<StateId> num_states;
  std::optional<StateId> start;
  std::optional<Alphabet> alphabet;
  std::vector<StateId> accept_list;
  std::vector<std::tuple<StateId, std::string, StateId>> edges;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw AutomatonError("fsa text line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find('\t') != std::string::npos) {
      std::istringstream ls(line);
      std::string from, label, to;
      if (!std::getline(ls, from, '\t') || !std::getline(ls, label, '\t') || !std::getline(ls, to, '\t'))
        fail("malformed transition");
      try {
        edges.emplace_back(std::stoi(from), label, std::stoi(to));
      } catch (const std::exception&) {
        fail("malformed state number");
      }
      continue;
    }
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "states") {
      StateId n = -1;
      if (!(ls >> n) || n <= 0) fail("bad state count");
      num_states = n;
    } else if (keyword == "alphabet") {
      std::vector<std::string> names;
      for (std::string s; ls >> s;) names.push_back(s);
      alphabet = Alphabet(std::move(names));
    } else if (keyword == "start") {
      StateId s = -1;
      if (!(ls >> s)) fail("bad start state");
      start = s;
    } else if (keyword == "accept") {
      for (StateId s; ls >> s;) accept_list.push_back(s);
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (!num_states || !start || !alphabet) throw AutomatonError("fsa text missing header lines");
  const auto n = static_cast<std::size_t>(*num_states);
  const auto k = alphabet->size();
  std::vector<StateId> delta(n * k, -1);
  for (const auto& [from, label, to] : edges) {
    auto sym = alphabet->find(label);
    if (!sym) throw AutomatonError("transition uses unknown label '" + label + "'");
    if (from < 0 || static_cast<std::size_t>(from) >= n) throw AutomatonError("transition source out of range");
    auto& slot = delta[static_cast<std::size_t>(from) * k + static_cast<std::size_t>(*sym)];
    if (slot >= 0) throw AutomatonError("duplicate transition");
    slot = to;
  }
  if (std::find(delta.begin(), delta.end(), -1) != delta.end()) throw AutomatonError("transition table is not total");
  std::vector<char> accepting(n, 0);
  for (StateId s : accept_list) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) throw AutomatonError("accept state out of range");
    accepting[static_cast<std::size_t>(s)] = 1;
  }
  return Dfa(*alphabet, *start, std::move(delta), std::move(accepting));
}

std::string to_dot(const Dfa& dfa, const std::string& name, bool hide_sink) {
  const auto live = dfa.live_states();
  auto shown = [&](StateId s) { return !hide_sink || live[static_cast<std::size_t>(s)] || s == dfa.start(); };
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
  out << "  __start [shape=point];\n  __start -> " << dfa.start() << ";\n";
  for (StateId s = 0; s < dfa.num_states(); ++s) {
    if (!shown(s)) continue;
    out << "  " << s << " [label=\"" << s << "\"" << (dfa.accepting(s) ? ", shape=doublecircle" : "") << "];\n";
  }
  for (StateId s = 0; s < dfa.num_states(); ++s) {
    if (!shown(s)) continue;
    std::map<StateId, std::vector<std::string>> grouped;
    for (Symbol a = 0; a < static_cast<Symbol>(dfa.num_symbols()); ++a) {
      const StateId t = dfa.next(s, a);
      if (shown(t)) grouped[t].push_back(dfa.alphabet().name(a));
    }
    for (const auto& [t, labels] : grouped) {
      out << "  " << s << " -> " << t << " [label=\"";
      for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << labels[i];
      out << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace regcocycle::fsa
