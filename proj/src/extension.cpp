#include "regcocycle/extension.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace regcocycle {

Extension::Extension(std::shared_ptr<const Cocycle> sigma) : sigma_(std::move(sigma)) {
  if (!sigma_) throw CocycleError("extension needs a cocycle");
}

ExtElement Extension::mul(const ExtElement& p, const ExtElement& q) const {
  const auto& coeffs = coefficients();
  auto base = ball().multiply(p.base, q.base);
  if (!base) throw OutOfBall("extension product leaves the ball");
  auto s = sigma_->value(p.base, q.base);
  if (!s) throw OutOfBall("cocycle value unavailable for an extension product");
  return {*base, coeffs.add(coeffs.add(sigma_->act(p.fiber, q.base), q.fiber), *s)};
}

ExtElement Extension::inverse(const ExtElement& p) const {
  const auto& coeffs = coefficients();
  auto gi = ball().inverse(p.base);
  if (!gi) throw OutOfBall("inverse outside the ball");
  auto s = sigma_->value(p.base, *gi);
  if (!s) throw OutOfBall("cocycle value unavailable for an inverse");
  return {*gi, coeffs.neg(coeffs.add(sigma_->act(p.fiber, *gi), *s))};
}

ExtElement Extension::product(const std::vector<ExtElement>& factors) const {
  ExtElement acc = identity();
  for (const auto& f : factors) acc = mul(acc, f);
  return acc;
}

ExtElement Extension::section_word(const Word& w) const {
  ExtElement acc = identity();
  for (Letter x : w) acc = mul(acc, section(ball().neighbor(ball().identity(), x)));
  return acc;
}

std::string Extension::format(const ExtElement& p) const {
  const std::string base = ball().group().format(ball().word(p.base));
  return "(" + (base.empty() ? std::string("1") : base) + ", " + coefficients().format(p.fiber) + ")";
}

ExtElement relator_product(const Extension& ext) { return ext.section_word(ext.ball().group().relator()); }

CentralityReport centrality_check(const Extension& ext, int radius) {
  CentralityReport report;
  const auto& coeffs = ext.coefficients();
  for (ElementId g : ext.ball().elements_up_to(radius)) {
    for (std::size_t i = 0; i < coeffs.dimension(); ++i)
      for (int sign : {1, -1}) {
        const ExtElement a = ext.fiber(coeffs.unit(i, sign));
        const ExtElement s = ext.section(g);
        ++report.checked;
        if (ext.mul(a, s) != ext.mul(s, a)) {
          if (report.central) report.witness = {a, s};
          report.central = false;
        }
      }
  }
  return report;
}

// ---------------------------------------------------------------------

namespace {

std::string offset_name(const Coeff& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "}";
}

}  // namespace

YAlphabet::YAlphabet(const Extension& ext, const std::vector<std::vector<Coeff>>& values)
    : coeffs_(ext.coefficients()) {
  const auto& ball = ext.ball();
  const auto& coeffs = ext.coefficients();
  std::map<std::pair<Letter, Coeff>, ExtElement> found;
  for (Letter x = 0; x < static_cast<Letter>(values.size()); ++x)
    for (const auto& a : values[static_cast<std::size_t>(x)]) {
      Coeff offset = coeffs.neg(a);
      found.emplace(std::pair{x, offset}, ext.mul(ext.section(ball.neighbor(ball.identity(), x)), ext.fiber(offset)));
    }
  std::vector<std::pair<std::pair<Letter, Coeff>, ExtElement>> todo(found.begin(), found.end());
  for (const auto& [key, value] : todo) {
    const ExtElement inv = ext.inverse(value);
    const Letter xi = inverse_letter(key.first);
    auto s = ext.cocycle().value(inv.base, ball.identity());
    if (!s) throw CocycleError("cocycle value unavailable at (x, 1)");
    found.try_emplace(std::pair{xi, coeffs.sub(inv.fiber, *s)}, inv);
  }
  std::vector<std::string> names;
  for (const auto& [key, value] : found) {
    index_.emplace(key, static_cast<fsa::Symbol>(symbols_.size()));
    symbols_.push_back({key.first, key.second, value});
    names.push_back(ball.group().letter_name(key.first) + offset_name(key.second));
  }
  alphabet_ = fsa::Alphabet(std::move(names));
}

std::optional<fsa::Symbol> YAlphabet::find(Letter x, const Coeff& offset) const {
  auto it = index_.find({x, coeffs_.normalize(offset)});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool YAlphabet::symmetric(const Extension& ext) const {
  std::set<ExtElement> values;
  for (const auto& s : symbols_) values.insert(s.value);
  return std::all_of(symbols_.begin(), symbols_.end(),
                     [&](const YSymbol& s) { return values.count(ext.inverse(s.value)) > 0; });
}

fsa::SymbolWord lift_word_from(const Extension& ext, const YAlphabet& y, ElementId g, const Word& v) {
  const auto& ball = ext.ball();
  fsa::SymbolWord out;
  ElementId cur = g;
  for (Letter x : v) {
    auto s = ext.cocycle().value(cur, ball.neighbor(ball.identity(), x));
    if (!s) throw CocycleError("cocycle value unavailable along the lifted word");
    auto sym = y.find(x, ext.coefficients().neg(*s));
    if (!sym) throw CocycleError("no Y symbol " + ball.group().letter_name(x) + offset_name(ext.coefficients().neg(*s)));
    out.push_back(*sym);
    cur = ball.neighbor(cur, x);
    if (cur == kNone) throw CocycleError("lifted word leaves the ball");
  }
  return out;
}

fsa::SymbolWord lift_word(const Extension& ext, const YAlphabet& y, const Word& v) {
  return lift_word_from(ext, y, ext.ball().identity(), v);
}

std::vector<fsa::LevelMachine> level_machines(const std::vector<LevelSetMachines>& machines, const YAlphabet& y) {
  std::vector<fsa::LevelMachine> out;
  for (const auto& m : machines)
    for (const auto& [a, dfa] : m.dfas) {
      Coeff offset(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) offset[i] = -a[i];
      auto sym = y.find(m.letter, offset);
      if (!sym) throw CocycleError("level machine value has no Y symbol");
      out.push_back({m.letter, *sym, dfa});
    }
  return out;
}

fsa::Dfa lifted_language(const fsa::Dfa& word_acceptor, const std::vector<LevelSetMachines>& machines,
                         const YAlphabet& y, fsa::ProductMode mode) {
  const auto lms = level_machines(machines, y);
  return fsa::minimize(fsa::prop22_product(word_acceptor, lms, y.alphabet(), mode));
}

// ---------------------------------------------------------------------

FiberLanguage::FiberLanguage(const Coefficients& coeffs) : coeffs_(coeffs) {
  const auto& moduli = coeffs.moduli();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const std::string n = std::to_string(i + 1);
    names.push_back((moduli[i] == 0 ? "z" : "t") + n);
    names.push_back((moduli[i] == 0 ? "Z" : "T") + n);
  }
  alphabet_ = fsa::Alphabet(names);

  fsa::Nfa nfa(alphabet_);
  fsa::StateId entry = nfa.add_state();
  nfa.add_start(entry);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const fsa::StateId exit = nfa.add_state();
    nfa.add_edge(entry, fsa::kEpsilon, exit);
    const auto plus = static_cast<fsa::Symbol>(2 * i), minus = static_cast<fsa::Symbol>(2 * i + 1);
    if (moduli[i] == 0) {
      for (fsa::Symbol z : {plus, minus}) {
        const fsa::StateId run = nfa.add_state();
        nfa.add_edge(entry, z, run);
        nfa.add_edge(run, z, run);
        nfa.add_edge(run, fsa::kEpsilon, exit);
      }
    } else {
      fsa::StateId prev = entry;
      for (std::int64_t k = 1; k < moduli[i]; ++k) {
        const fsa::StateId s = nfa.add_state();
        nfa.add_edge(prev, plus, s);
        nfa.add_edge(s, fsa::kEpsilon, exit);
        prev = s;
      }
    }
    entry = exit;
  }
  nfa.set_accepting(entry);
  dfa_ = fsa::minimize(fsa::determinize(nfa));
}

fsa::SymbolWord FiberLanguage::normal_form(const Coeff& a) const {
  const Coeff n = coeffs_.normalize(a);
  fsa::SymbolWord w;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto sym = static_cast<fsa::Symbol>(2 * i + (n[i] < 0 ? 1 : 0));
    w.insert(w.end(), static_cast<std::size_t>(std::llabs(n[i])), sym);
  }
  return w;
}

Coeff FiberLanguage::evaluate(const fsa::SymbolWord& w) const {
  Coeff a = coeffs_.zero();
  for (fsa::Symbol z : w) {
    auto [i, sign] = generator(z);
    a[i] += sign;
  }
  return coeffs_.normalize(a);
}

std::size_t FiberLanguage::norm(const Coeff& a) const { return normal_form(a).size(); }

std::pair<std::size_t, int> FiberLanguage::generator(fsa::Symbol z) const {
  if (z < 0 || static_cast<std::size_t>(z) >= alphabet_.size()) throw fsa::AutomatonError("not a fiber symbol");
  return {static_cast<std::size_t>(z) / 2, z % 2 == 0 ? 1 : -1};
}

MEvaluator::MEvaluator(const Extension& ext, const YAlphabet& y, const FiberLanguage& fiber)
    : ext_(&ext), alphabet_(fsa::alphabet_union(y.alphabet(), fiber.alphabet())) {
  if (alphabet_.size() != y.size() + fiber.alphabet().size())
    throw fsa::AutomatonError("Y and Z alphabets overlap");
  for (const auto& s : y.symbols()) values_.push_back(s.value);
  for (fsa::Symbol z = 0; z < static_cast<fsa::Symbol>(fiber.alphabet().size()); ++z) {
    auto [i, sign] = fiber.generator(z);
    values_.push_back(ext.fiber(ext.coefficients().unit(i, sign)));
  }
}

ExtElement MEvaluator::evaluate(const fsa::SymbolWord& w) const {
  ExtElement acc = ext_->identity();
  for (fsa::Symbol s : w) acc = ext_->mul(acc, symbol_value(s));
  return acc;
}

bool MEvaluator::projection_is_short() const {
  return std::all_of(values_.begin(), values_.end(), [&](const ExtElement& v) { return ext_->ball().length(v.base) <= 1; });
}

fsa::Dfa build_m(const fsa::Dfa& lifted, const FiberLanguage& fiber) {
  return fsa::minimize(fsa::determinize(fsa::concatenate(lifted, fiber.dfa())));
}

MBijectionReport check_m_bijection(const Extension& ext, const fsa::Dfa& m, const MEvaluator& eval,
                                   const FiberLanguage& fiber, int length) {
  const auto& ball = ext.ball();
  if (ball.radius() < length) throw OutOfBall("ball radius below the enumeration length");
  MBijectionReport report;

  // Fiber elements by normal form length.
  const auto& moduli = ext.coefficients().moduli();
  std::vector<std::size_t> by_norm(static_cast<std::size_t>(length) + 1, 0);
  by_norm[0] = 1;
  for (auto m : moduli) {
    std::vector<std::size_t> next(by_norm.size(), 0);
    for (std::size_t n = 0; n < by_norm.size(); ++n) {
      if (!by_norm[n]) continue;
      if (m == 0) {
        next[n] += by_norm[n];
        for (std::size_t k = 1; n + k < by_norm.size(); ++k) next[n + k] += 2 * by_norm[n];
      } else {
        for (std::int64_t k = 0; k < m && n + static_cast<std::size_t>(k) < by_norm.size(); ++k)
          next[n + static_cast<std::size_t>(k)] += by_norm[n];
      }
    }
    by_norm = std::move(next);
  }
  for (int j = 0; j <= length; ++j) report.expected += by_norm[static_cast<std::size_t>(j)] * ball.elements_up_to(length - j).size();

  std::set<ExtElement> seen;
  for (const auto& w : m.enumerate(static_cast<std::size_t>(length))) {
    ++report.words;
    const ExtElement e = eval.evaluate(w);
    if (ball.length(e.base) + static_cast<int>(fiber.norm(e.fiber)) > length) ++report.outside;
    if (!seen.insert(e).second) ++report.duplicates;
  }
  return report;
}

// ---------------------------------------------------------------------

std::optional<int> ext_distance_bound(const Extension& ext, const FiberLanguage& fiber, const ExtElement& p,
                                      const ExtElement& q) {
  try {
    const ExtElement u = ext.mul(ext.inverse(p), q);
    auto s = ext.cocycle().value(u.base, ext.ball().identity());
    if (!s) return std::nullopt;
    return ext.ball().length(u.base) + static_cast<int>(fiber.norm(ext.coefficients().sub(u.fiber, *s)));
  } catch (const OutOfBall&) {
    return std::nullopt;
  }
}

SectionDistanceReport section_distance_check(const Extension& ext, const YAlphabet& y, const MEvaluator& eval,
                                             int radius, std::size_t count, std::mt19937_64& rng) {
  const auto& ball = ext.ball();
  SectionDistanceReport report;
  const auto elements = ball.elements_up_to(radius);
  std::uniform_int_distribution<std::size_t> pick(0, elements.size() - 1);
  const bool short_projection = eval.projection_is_short();
  for (std::size_t attempts = 0; report.checked < count && attempts < 100 * count; ++attempts) {
    const ElementId g = elements[pick(rng)], h = elements[pick(rng)];
    auto gi = ball.inverse(g);
    auto u = gi ? ball.multiply(*gi, h) : std::nullopt;
    if (!u) {
      ++report.skipped;
      continue;
    }
    fsa::SymbolWord lifted;
    ExtElement end;
    try {
      lifted = lift_word_from(ext, y, g, ball.word(*u));
      end = ext.section(g);
      for (fsa::Symbol s : lifted) end = ext.mul(end, y.symbol(s).value);
    } catch (const std::exception&) {
      ++report.skipped;
      continue;
    }
    ++report.checked;
    if (!short_projection || end != ext.section(h) || static_cast<int>(lifted.size()) != ball.length(*u)) {
      if (!report.mismatches) report.witness = {g, h};
      ++report.mismatches;
    }
  }
  return report;
}

LiftedTravellerReport lifted_fellow_traveller(const Extension& ext, const YAlphabet& y, const FiberLanguage& fiber,
                                              int radius) {
  const auto& ball = ext.ball();
  LiftedTravellerReport report;
  report.radius = radius;
  const int letters = ball.num_letters();

  std::vector<std::vector<fsa::Symbol>> by_letter(static_cast<std::size_t>(letters));
  for (fsa::Symbol s = 0; s < static_cast<fsa::Symbol>(y.size()); ++s)
    by_letter[static_cast<std::size_t>(y.symbol(s).letter)].push_back(s);

  auto bound = [&](const ExtElement& p, const ExtElement& q) -> std::optional<int> {
    return ext_distance_bound(ext, fiber, p, q);
  };

  for (ElementId g : ball.elements_up_to(radius - 2)) {
    const Word& v = ball.word(g);
    const std::size_t n = v.size();
    std::vector<ElementId> prefix{ball.identity()};
    for (Letter x : v) prefix.push_back(ball.neighbor(prefix.back(), x));

    for (fsa::Symbol s1 = 0; s1 < static_cast<fsa::Symbol>(y.size()); ++s1) {
      const ExtElement& y1 = y.symbol(s1).value;
      // Points of y1 w1: identity, then y1 s(p_t) for t = 0..n.
      std::vector<ExtElement> points{ext.identity()};
      for (std::size_t t = 0; t <= n; ++t) points.push_back(ext.mul(y1, ext.section(prefix[t])));
      const auto x1g = ball.multiply(y1.base, g);

      for (Letter x2 = 0; x2 < letters; ++x2) {
        const auto& second = by_letter[static_cast<std::size_t>(x2)];
        if (second.empty()) continue;
        const ElementId h = x1g ? ball.neighbor(*x1g, x2) : kNone;
        if (h == kNone) {
          report.skipped += second.size();
          continue;
        }
        std::vector<ElementId> hp{ball.identity()};
        for (Letter x : ball.word(h)) hp.push_back(ball.neighbor(hp.back(), x));
        auto target = [&](std::size_t j) { return ext.section(hp[std::min(j, hp.size() - 1)]); };

        int common = 0;
        bool ok = true;
        for (std::size_t j = 0; j < points.size() && ok; ++j) {
          auto d = bound(points[j], target(j));
          if (!d) ok = false;
          else common = std::max(common, *d);
        }
        for (fsa::Symbol s2 : second) {
          if (!ok) {
            ++report.skipped;
            continue;
          }
          const ExtElement last = ext.mul(points.back(), y.symbol(s2).value);
          auto d = bound(last, target(n + 2));
          if (!d) {
            ++report.skipped;
            continue;
          }
          ++report.pairs;
          report.k = std::max({report.k, common, *d});
        }
      }
    }
  }
  return report;
}

}  // namespace regcocycle
