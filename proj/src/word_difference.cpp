#include "regcocycle/word_difference.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace regcocycle {

std::optional<ElementId> left_multiply(const CayleyBall& ball, Letter a, ElementId d) {
  const ElementId e = ball.walk(ball.neighbor(ball.identity(), a), ball.word(d));
  if (e != kNone) return e;
  return ball.find(concat(Word{a}, ball.word(d)));
}

bool pair_differences(const CayleyBall& ball, const Word& p, const Word& q, ElementId d0,
                      std::vector<ElementId>& out) {
  ElementId d = d0;
  out.push_back(d);
  const std::size_t n = std::max(p.size(), q.size());
  for (std::size_t t = 0; t < n; ++t) {
    if (t < p.size()) {
      auto l = left_multiply(ball, inverse_letter(p[t]), d);
      if (!l) return false;
      d = *l;
    }
    if (t < q.size()) {
      d = ball.neighbor(d, q[t]);
      if (d == kNone) return false;
    }
    out.push_back(d);
  }
  return true;
}

namespace {

void finish(DifferenceData& data, const CayleyBall& ball) {
  std::sort(data.differences.begin(), data.differences.end());
  data.differences.erase(std::unique(data.differences.begin(), data.differences.end()), data.differences.end());
  data.max_length = 0;
  for (ElementId d : data.differences) data.max_length = std::max(data.max_length, ball.length(d));
}

void add_pair(const CayleyBall& ball, DifferenceData& data, const Word& p, const Word& q, ElementId d0) {
  if (!pair_differences(ball, p, q, d0, data.differences))
    throw GroupError("word difference leaves the ball for the pair (" + ball.group().format(p) + ", " +
                     ball.group().format(q) + ")");
  ++data.pairs;
}

void check_data_radius(const CayleyBall& ball, int data_radius) {
  if (data_radius < 1 || data_radius > ball.radius())
    throw GroupError("data radius must lie in [1, " + std::to_string(ball.radius()) + "]");
}

struct DifferenceIndex {
  DifferenceIndex(const CayleyBall& ball, const std::vector<ElementId>& differences)
      : elements(differences), num_letters(ball.num_letters()) {
    for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], static_cast<int>(i));
    const int k = num_letters;
    table.assign(elements.size() * static_cast<std::size_t>((k + 1) * (k + 1)), -1);
    for (std::size_t i = 0; i < elements.size(); ++i)
      for (Letter a = 0; a <= k; ++a) {
        std::optional<ElementId> left = elements[i];
        if (a < k) left = left_multiply(ball, inverse_letter(a), elements[i]);
        if (!left) continue;
        for (Letter b = 0; b <= k; ++b) {
          if (a == k && b == k) continue;
          const ElementId e = b < k ? ball.neighbor(*left, b) : *left;
          if (e != kNone) table[(i * static_cast<std::size_t>(k + 1) + a) * static_cast<std::size_t>(k + 1) + b] = find(e);
        }
      }
  }
  int find(ElementId e) const {
    auto it = index.find(e);
    return it == index.end() ? -1 : it->second;
  }
  // a^-1 d b with pad = num_letters acting as 1; -1 outside the set.
  int step(int d, Letter a, Letter b) const {
    const auto k1 = static_cast<std::size_t>(num_letters + 1);
    return table[(static_cast<std::size_t>(d) * k1 + static_cast<std::size_t>(a)) * k1 + static_cast<std::size_t>(b)];
  }

  std::vector<ElementId> elements;
  int num_letters = 0;
  std::unordered_map<ElementId, int> index;
  std::vector<int> table;
};

}  // namespace

DifferenceData collect_differences(const CayleyBall& ball, PairSource source, Letter x, int data_radius) {
  check_data_radius(ball, data_radius);
  DifferenceData data;
  const auto domain = ball.elements_up_to(data_radius - 1);
  switch (source) {
    case PairSource::Diagonal:
      data.differences = {ball.identity()};
      data.pairs = ball.elements_up_to(data_radius).size();
      break;
    case PairSource::RightMultiplier:
      for (ElementId u : domain) add_pair(ball, data, ball.word(u), ball.word(ball.neighbor(u, x)), ball.identity());
      break;
    case PairSource::LeftMultiplier: {
      const ElementId x_inv = ball.neighbor(ball.identity(), inverse_letter(x));
      for (ElementId v : domain) {
        const ElementId w = ball.element(concat(Word{x}, ball.word(v)));
        add_pair(ball, data, ball.word(v), ball.word(w), x_inv);
      }
      break;
    }
  }
  finish(data, ball);
  return data;
}

fsa::TwoTapeAutomaton difference_comparator(const CayleyBall& ball, const std::vector<ElementId>& differences,
                                            ElementId d0, ElementId accept) {
  const DifferenceIndex index(ball, differences);
  const fsa::Alphabet base = ball.group().alphabet();
  const fsa::Alphabet pairs = fsa::TwoTapeAutomaton::pair_alphabet(base);
  const int start = index.find(d0);
  const int target = index.find(accept);
  const Letter pad = fsa::TwoTapeAutomaton::pad(base);
  // Key: difference index * 4 + (tape-1 padded) * 2 + (tape-2 padded).
  using Key = std::int64_t;
  std::function<std::optional<Key>(const Key&, fsa::Symbol)> step = [&](const Key& key, fsa::Symbol s) -> std::optional<Key> {
    int d = static_cast<int>(key / 4);
    bool p1 = (key & 2) != 0, p2 = (key & 1) != 0;
    auto [a, b] = fsa::TwoTapeAutomaton::split_pair(base, s);
    if (a == pad) p1 = true;
    else if (p1) return std::nullopt;
    if (b == pad) p2 = true;
    else if (p2) return std::nullopt;
    d = index.step(d, a, b);
    if (d < 0) return std::nullopt;
    return static_cast<Key>(d) * 4 + (p1 ? 2 : 0) + (p2 ? 1 : 0);
  };
  std::function<bool(const Key&)> accepting = [&](const Key& key) { return key / 4 == target; };
  if (start < 0) return fsa::TwoTapeAutomaton(base, fsa::Dfa::empty_language(pairs), fsa::TapeMode::Synchronous);
  fsa::Dfa dfa = fsa::build_reachable<Key, std::hash<Key>>(pairs, static_cast<Key>(start) * 4, step, accepting,
                                                           10'000'000);
  return fsa::TwoTapeAutomaton(base, fsa::minimize(dfa), fsa::TapeMode::Synchronous);
}

WordDifferenceMachine build_word_difference_machine(const CayleyBall& ball, PairSource source, Letter x) {
  const int R = ball.radius();
  WordDifferenceMachine m{source, x, collect_differences(ball, source, x, R),
                          fsa::TwoTapeAutomaton(ball.group().alphabet(),
                                                fsa::Dfa::empty_language(fsa::TwoTapeAutomaton::pair_alphabet(
                                                    ball.group().alphabet())),
                                                fsa::TapeMode::Synchronous),
                          false};
  ElementId d0 = ball.identity(), accept = ball.identity();
  if (source == PairSource::RightMultiplier) accept = ball.neighbor(ball.identity(), x);
  if (source == PairSource::LeftMultiplier) d0 = ball.neighbor(ball.identity(), inverse_letter(x));
  m.comparator = difference_comparator(ball, m.data.differences, d0, accept);
  if (R >= 2) m.stabilized = collect_differences(ball, source, x, R - 1).differences == m.data.differences;
  return m;
}

// ---------------------------------------------------------------------

DifferenceData reduction_differences(const CayleyBall& ball, int data_radius) {
  check_data_radius(ball, data_radius);
  DifferenceData data;
  for (ElementId u : ball.elements_up_to(data_radius - 1))
    for (Letter x = 0; x < ball.num_letters(); ++x) {
      const ElementId t = ball.neighbor(u, x);
      Word candidate = concat(ball.word(u), Word{x});
      if (ball.word(t) != candidate) add_pair(ball, data, candidate, ball.word(t), ball.identity());
    }
  data.differences.push_back(ball.identity());
  finish(data, ball);
  return data;
}

fsa::Dfa shortlex_acceptor(const CayleyBall& ball, const std::vector<ElementId>& differences) {
  std::vector<ElementId> elems = differences;
  if (std::find(elems.begin(), elems.end(), ball.identity()) == elems.end()) elems.push_back(ball.identity());
  const DifferenceIndex index(ball, elems);
  const int k = ball.num_letters();
  const int one = index.find(ball.identity());
  enum { EQ = 0, LT = 1, GT = 2, SHORT = 3 };

  // NFA for words with a prefix p that has an equal word q < p; q is read
  // on a hidden second tape. State d*4 + cmp, then one absorbing state.
  fsa::Nfa nfa(ball.group().alphabet());
  const auto n = static_cast<fsa::StateId>(elems.size() * 4);
  for (fsa::StateId s = 0; s < n; ++s) nfa.add_state(false);
  const fsa::StateId absorbing = nfa.add_state(true);
  for (Letter a = 0; a < k; ++a) nfa.add_edge(absorbing, a, absorbing);
  for (int d = 0; d < static_cast<int>(elems.size()); ++d)
    for (int cmp = 0; cmp < 4; ++cmp) {
      const fsa::StateId from = d * 4 + cmp;
      if (d == one && (cmp == LT || cmp == SHORT)) nfa.add_edge(from, fsa::kEpsilon, absorbing);
      for (Letter a = 0; a < k; ++a) {
        const int padded = index.step(d, a, k);
        if (padded >= 0) nfa.add_edge(from, a, padded * 4 + SHORT);
        if (cmp == SHORT) continue;
        for (Letter b = 0; b < k; ++b) {
          const int next = index.step(d, a, b);
          if (next < 0) continue;
          int c = cmp;
          if (cmp == EQ) c = b < a ? LT : (b > a ? GT : EQ);
          nfa.add_edge(from, a, next * 4 + c);
        }
      }
    }
  nfa.add_start(one * 4 + EQ);
  return fsa::minimize(fsa::complement(fsa::determinize(nfa)));
}

WordAcceptor build_word_acceptor(const CayleyBall& ball, int data_radius) {
  WordAcceptor acc;
  acc.data = reduction_differences(ball, data_radius);
  acc.dfa = shortlex_acceptor(ball, acc.data.differences);
  acc.data_radius = data_radius;
  acc.stabilized = data_radius >= 2 && reduction_differences(ball, data_radius - 1).differences == acc.data.differences;
  return acc;
}

bool acceptor_matches_ball(const fsa::Dfa& acceptor, const CayleyBall& ball, int radius) {
  const auto words = acceptor.enumerate(static_cast<std::size_t>(radius));
  const auto elements = ball.elements_up_to(radius);
  if (words.size() != elements.size()) return false;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i] != ball.word(elements[i])) return false;
  return true;
}

Word shortlex_reduce(const CayleyBall& ball, const WordAcceptor& acceptor, Word w) {
  std::vector<ElementId> elems = acceptor.data.differences;
  const DifferenceIndex index(ball, elems);
  const int k = ball.num_letters();
  const int one = index.find(ball.identity());
  if (one < 0) throw GroupError("reduction differences must contain the identity");
  ball.group().check_word(w);
  enum { EQ = 0, LT = 1, GT = 2, SHORT = 3 };
  struct Back {
    int prev;  // state at the previous position
    Letter b;  // second-tape letter, or k for a pad
  };
  const auto n = elems.size() * 4;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > 1'000'000) throw GroupError("shortlex reduction does not terminate");
    if (acceptor.dfa.accepts(w)) return w;
    // Shortest rejected prefix.
    std::size_t len = 0;
    for (fsa::StateId s = acceptor.dfa.start(); acceptor.dfa.accepting(s); ++len) s = acceptor.dfa.next(s, w[len]);
    std::vector<std::vector<Back>> back(len + 1, std::vector<Back>(n, Back{-1, -1}));
    back[0][static_cast<std::size_t>(one * 4 + EQ)] = {0, k};
    for (std::size_t t = 0; t < len; ++t) {
      const Letter a = w[t];
      for (std::size_t st = 0; st < n; ++st) {
        if (back[t][st].prev < 0) continue;
        const int d = static_cast<int>(st / 4), cmp = static_cast<int>(st % 4);
        auto mark = [&](int d2, int c2, Letter b) {
          auto& slot = back[t + 1][static_cast<std::size_t>(d2 * 4 + c2)];
          if (slot.prev < 0) slot = {static_cast<int>(st), b};
        };
        const int padded = index.step(d, a, k);
        if (padded >= 0) mark(padded, SHORT, k);
        if (cmp == SHORT) continue;
        for (Letter b = 0; b < k; ++b) {
          const int next = index.step(d, a, b);
          if (next < 0) continue;
          mark(next, cmp == EQ ? (b < a ? LT : (b > a ? GT : EQ)) : cmp, b);
        }
      }
    }
    int st = -1;
    for (int c : {LT, SHORT})
      if (back[len][static_cast<std::size_t>(one * 4 + c)].prev >= 0) st = one * 4 + c;
    if (st < 0) throw GroupError("acceptor rejection has no witness among the differences");
    Word q;
    for (std::size_t t = len; t > 0; --t) {
      const Back& bk = back[t][static_cast<std::size_t>(st)];
      if (bk.b != k) q.push_back(bk.b);
      st = bk.prev;
    }
    std::reverse(q.begin(), q.end());
    q.insert(q.end(), w.begin() + static_cast<std::ptrdiff_t>(len), w.end());
    w = std::move(q);
  }
}

// ---------------------------------------------------------------------

EndTuple end_tuple(const Word& u, const Word& w, int num_letters) {
  return {u.empty() ? num_letters : u.front(), u.empty() ? num_letters : u.back(),
          w.empty() ? num_letters : w.front(), w.empty() ? num_letters : w.back()};
}

namespace {

struct MultKey {
  int d, q2, f2, l2;
  bool p1, p2;
  bool operator==(const MultKey&) const = default;
};

struct MultKeyHash {
  std::size_t operator()(const MultKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.d);
    h = h * 1000003u + static_cast<std::size_t>(k.q2);
    h = h * 131u + static_cast<std::size_t>(k.f2);
    h = h * 131u + static_cast<std::size_t>(k.l2);
    return h * 4u + (k.p1 ? 2u : 0u) + (k.p2 ? 1u : 0u);
  }
};

struct TrackKey {
  fsa::StateId s, q1;
  int f1, l1;
  bool operator==(const TrackKey&) const = default;
};

struct TrackKeyHash {
  std::size_t operator()(const TrackKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.s);
    h = h * 1000003u + static_cast<std::size_t>(k.q1);
    h = h * 131u + static_cast<std::size_t>(k.f1);
    return h * 131u + static_cast<std::size_t>(k.l1);
  }
};

}  // namespace

MultiplierClassifier build_multiplier_classifier(const CayleyBall& ball, const WordAcceptor& acceptor,
                                                 const std::vector<ElementId>& right_differences, Letter x,
                                                 std::size_t state_limit) {
  std::vector<ElementId> elems = right_differences;
  const ElementId xbar = ball.neighbor(ball.identity(), x);
  for (ElementId e : {ball.identity(), xbar})
    if (std::find(elems.begin(), elems.end(), e) == elems.end()) elems.push_back(e);
  const DifferenceIndex index(ball, elems);
  const int k = ball.num_letters();
  const int sentinel = k;
  const fsa::Dfa& L = acceptor.dfa;
  const auto live = L.live_states();
  const int target = index.find(xbar);

  // Two-tape multiplier (u, w) projected to the first tape; the second
  // tape is guessed and tracked through the word acceptor.
  fsa::Nfa nfa(ball.group().alphabet());
  std::unordered_map<MultKey, fsa::StateId, MultKeyHash> ids;
  std::vector<MultKey> keys;
  auto intern = [&](const MultKey& key) {
    auto [it, inserted] = ids.try_emplace(key, static_cast<fsa::StateId>(keys.size()));
    if (inserted) {
      if (keys.size() >= state_limit) throw ResourceError("multiplier automaton exceeds the state limit");
      keys.push_back(key);
      nfa.add_state(key.d == target && L.accepting(key.q2));
    }
    return it->second;
  };
  nfa.add_start(intern({index.find(ball.identity()), L.start(), sentinel, sentinel, false, false}));
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const MultKey key = keys[i];
    const auto from = static_cast<fsa::StateId>(i);
    auto read_second = [&](Letter a, Letter b) -> std::optional<MultKey> {
      const int d2 = index.step(key.d, a, b);
      if (d2 < 0) return std::nullopt;
      const fsa::StateId q2 = L.next(key.q2, b);
      if (!live[static_cast<std::size_t>(q2)]) return std::nullopt;
      return MultKey{d2, q2, key.f2 == sentinel ? b : key.f2, b, key.p1, false};
    };
    if (!key.p1) {
      for (Letter a = 0; a < k; ++a) {
        if (!key.p2)
          for (Letter b = 0; b < k; ++b)
            if (auto next = read_second(a, b)) nfa.add_edge(from, a, intern(*next));
        const int d = index.step(key.d, a, k);
        if (d < 0) continue;
        MultKey padded = key;
        padded.d = d;
        padded.p2 = true;
        nfa.add_edge(from, a, intern(padded));
      }
    }
    if (!key.p2)
      for (Letter b = 0; b < k; ++b)
        if (auto next = read_second(k, b)) {
          next->p1 = true;
          nfa.add_edge(from, fsa::kEpsilon, intern(*next));
        }
  }

  std::vector<std::vector<fsa::StateId>> subsets;
  const fsa::Dfa det = fsa::determinize(nfa, &subsets);

  // Track the first tape through the acceptor and its first/last letters.
  std::function<std::optional<TrackKey>(const TrackKey&, fsa::Symbol)> step =
      [&](const TrackKey& t, fsa::Symbol a) -> std::optional<TrackKey> {
    const fsa::StateId q1 = L.next(t.q1, a);
    if (!live[static_cast<std::size_t>(q1)]) return std::nullopt;
    return TrackKey{det.next(t.s, a), q1, t.f1 == sentinel ? a : t.f1, a};
  };
  std::function<bool(const TrackKey&)> accepting = [&](const TrackKey& t) {
    if (!L.accepting(t.q1)) return false;
    const auto& subset = subsets[static_cast<std::size_t>(t.s)];
    return std::any_of(subset.begin(), subset.end(), [&](fsa::StateId s) { return nfa.accepting(s); });
  };
  std::vector<TrackKey> track_keys;
  MultiplierClassifier out;
  out.letter = x;
  out.dfa = fsa::build_reachable<TrackKey, TrackKeyHash>(ball.group().alphabet(),
                                                         TrackKey{det.start(), L.start(), sentinel, sentinel}, step,
                                                         accepting, state_limit, &track_keys);
  out.tuples.assign(static_cast<std::size_t>(out.dfa.num_states()), {});
  out.differences = std::move(elems);
  out.complete = true;
  for (std::size_t i = 0; i < track_keys.size(); ++i) {
    const TrackKey& t = track_keys[i];
    if (!L.accepting(t.q1)) continue;
    std::set<EndTuple> found;
    for (fsa::StateId s : subsets[static_cast<std::size_t>(t.s)])
      if (nfa.accepting(s)) {
        const MultKey& m = keys[static_cast<std::size_t>(s)];
        found.insert({t.f1, t.l1, m.f2, m.l2});
      }
    if (found.empty()) out.complete = false;
    out.tuples[i + 1].assign(found.begin(), found.end());
  }
  if (!out.complete) {
    // Breadth-first in letter order reaches the shortlex-least orphan first.
    const auto states = static_cast<std::size_t>(out.dfa.num_states());
    std::vector<fsa::StateId> parent(states, -1);
    std::vector<Letter> via(states, -1);
    std::vector<fsa::StateId> queue{out.dfa.start()};
    parent[static_cast<std::size_t>(out.dfa.start())] = out.dfa.start();
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const fsa::StateId s = queue[i];
      if (s > 0 && L.accepting(track_keys[static_cast<std::size_t>(s - 1)].q1) &&
          out.tuples[static_cast<std::size_t>(s)].empty()) {
        Word u;
        for (fsa::StateId c = s; c != out.dfa.start(); c = parent[static_cast<std::size_t>(c)])
          u.push_back(via[static_cast<std::size_t>(c)]);
        std::reverse(u.begin(), u.end());
        out.orphan = std::move(u);
        break;
      }
      for (Letter a = 0; a < k; ++a) {
        const fsa::StateId t = out.dfa.next(s, a);
        if (parent[static_cast<std::size_t>(t)] >= 0) continue;
        parent[static_cast<std::size_t>(t)] = s;
        via[static_cast<std::size_t>(t)] = a;
        queue.push_back(t);
      }
    }
  }
  return out;
}

MultiplierClassifier build_complete_classifier(const CayleyBall& ball, const WordAcceptor& acceptor, Letter x,
                                               int data_radius, int max_rounds) {
  std::vector<ElementId> differences =
      collect_differences(ball, PairSource::RightMultiplier, x, data_radius).differences;
  for (int round = 0;; ++round) {
    MultiplierClassifier c = build_multiplier_classifier(ball, acceptor, differences, x);
    c.completion_pairs = round;
    if (c.complete || !c.orphan || round >= max_rounds) return c;
    const Word& u = *c.orphan;
    const Word w = shortlex_reduce(ball, acceptor, concat(u, Word{x}));
    if (!ball.group().equal(concat(u, Word{x}), w)) throw GroupError("shortlex reduction changed the element");
    const std::size_t before = differences.size();
    if (!pair_differences(ball, u, w, ball.identity(), differences))
      throw GroupError("multiplier difference leaves the ball for " + ball.group().format(u));
    std::sort(differences.begin(), differences.end());
    differences.erase(std::unique(differences.begin(), differences.end()), differences.end());
    if (differences.size() == before) return c;
  }
}

}  // namespace regcocycle
