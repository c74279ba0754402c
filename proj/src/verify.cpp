#include "regcocycle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace regcocycle {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

Json coeff_json(const Coeff& a) { return Json(a); }

std::int64_t free_abs_max(const Coefficients& coeffs, const Coeff& a) {
  std::int64_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (coeffs.moduli()[i] == 0) m = std::max(m, a[i] < 0 ? -a[i] : a[i]);
  return m;
}

fsa::Dfa random_dfa(const fsa::Alphabet& alphabet, int states, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> to(0, states - 1);
  std::bernoulli_distribution accept(0.4);
  std::vector<fsa::StateId> delta(static_cast<std::size_t>(states) * alphabet.size());
  for (auto& d : delta) d = to(rng);
  std::vector<char> acc(static_cast<std::size_t>(states));
  for (auto& a : acc) a = accept(rng) ? 1 : 0;
  return fsa::Dfa(alphabet, 0, std::move(delta), std::move(acc));
}

// Pair words with synchronous padding: once a tape is padded it stays padded.
fsa::Dfa padding_language(const fsa::Alphabet& base) {
  const fsa::Alphabet pairs = fsa::TwoTapeAutomaton::pair_alphabet(base);
  const auto pad = fsa::TwoTapeAutomaton::pad(base);
  const std::size_t k = pairs.size();
  std::vector<fsa::StateId> delta(4 * k, 3);
  for (fsa::Symbol p = 0; p < static_cast<fsa::Symbol>(k); ++p) {
    auto [a, b] = fsa::TwoTapeAutomaton::split_pair(base, p);
    const auto i = static_cast<std::size_t>(p);
    delta[i] = a == pad ? 1 : b == pad ? 2 : 0;
    if (a == pad) delta[k + i] = 1;
    if (b == pad) delta[2 * k + i] = 2;
  }
  return fsa::Dfa(pairs, 0, std::move(delta), {1, 1, 1, 0});
}

std::vector<fsa::SymbolWord> all_words(std::size_t symbols, std::size_t max_length) {
  std::vector<fsa::SymbolWord> out{{}};
  for (std::size_t begin = 0, len = 0; len < max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t a = 0; a < symbols; ++a) {
        fsa::SymbolWord w = out[i];
        w.push_back(static_cast<fsa::Symbol>(a));
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

}  // namespace

Word random_trivial_word(const SurfaceGroup& group, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> factors(1, 3), length(0, 3), letter(0, group.num_letters() - 1), sign(0, 1);
  for (;;) {
    Word w;
    const int k = factors(rng);
    for (int f = 0; f < k; ++f) {
      Word u;
      const int n = length(rng);
      for (int i = 0; i < n; ++i) u.push_back(letter(rng));
      u = free_reduce(u);
      const Word r = sign(rng) ? group.relator() : inverse(group.relator());
      w = concat(w, concat(u, concat(r, inverse(u))));
    }
    w = free_reduce(w);
    if (!w.empty()) return w;
  }
}

std::size_t half_relator_identifications(const SurfaceGroup& group, int k) {
  const Word& r = group.relator();
  const int half = static_cast<int>(r.size()) / 2;
  if (k < half) return 0;
  if (k > half) throw std::invalid_argument("only lengths up to half the relator are supported");
  std::set<Word> words;
  for (const Word& rel : {r, inverse(r)})
    for (std::size_t j = 0; j < rel.size(); ++j) {
      Word w;
      for (int i = 0; i < k; ++i) w.push_back(rel[(j + static_cast<std::size_t>(i)) % rel.size()]);
      words.insert(w);
    }
  return words.size() / 2;
}

LanguageTravellerReport language_fellow_traveller(const CayleyBall& ball, int radius) {
  LanguageTravellerReport report;
  report.radius = radius;
  const int letters = ball.num_letters();
  std::vector<std::vector<ElementId>> first, second;
  std::vector<std::pair<std::size_t, std::size_t>> lengths;
  auto prefixes = [&](ElementId start, const Word& w) {
    std::vector<ElementId> pts{start};
    for (Letter x : w) {
      const ElementId next = pts.back() == kNone ? kNone : ball.neighbor(pts.back(), x);
      pts.push_back(next);
    }
    return pts;
  };
  for (ElementId u : ball.elements_up_to(radius - 2)) {
    for (Letter x = -1; x < letters; ++x)
      for (Letter y = -1; y < letters; ++y) {
        Word path;
        if (x >= 0) path.push_back(x);
        path.insert(path.end(), ball.word(u).begin(), ball.word(u).end());
        if (y >= 0) path.push_back(y);
        auto p = prefixes(ball.identity(), path);
        if (p.back() == kNone) {
          ++report.skipped;
          continue;
        }
        auto q = prefixes(ball.identity(), ball.word(p.back()));
        lengths.emplace_back(p.size() - 1, q.size() - 1);
        first.push_back(std::move(p));
        second.push_back(std::move(q));
      }
  }
  fsa::PathMetric metric = [&](std::size_t pair, std::size_t i, std::size_t j) -> std::optional<int> {
    return ball.distance(first[pair][i], second[pair][j]);
  };
  const auto ft = fsa::fellow_traveller_check(lengths, metric, fsa::TapeMode::Synchronous);
  report.delta = ft.delta;
  report.pairs = ft.checked;
  report.skipped += ft.skipped;
  return report;
}

// ---------------------------------------------------------------------

Verifier::Verifier(VerifyConfig config) : config_(std::move(config)) {
  if (config_.genus < 2) throw UsageError("genus must be at least 2");
  if (config_.radius < 5) throw UsageError("radius must be at least 5");
  if (config_.cocycle != "section" && config_.cocycle != "zero")
    throw UsageError("unknown cocycle '" + config_.cocycle + "' (section|zero)");
  try {
    coeffs_ = Coefficients(config_.rank, config_.torsion);
  } catch (const std::exception& e) {
    throw UsageError(std::string("coefficients: ") + e.what());
  }
  surface_ = std::make_shared<const Surface>(config_.genus);
  try {
    action_ = config_.action.empty() ? FiniteAction::trivial(surface_->group, coeffs_)
                                     : FiniteAction::from_matrices(surface_->group, coeffs_, config_.action);
  } catch (const CocycleError& e) {
    throw UsageError(std::string("action: ") + e.what());
  }
  if (section_cocycle() && (coeffs_.rank() != 1 || coeffs_.dimension() != 1 || !action_->is_trivial()))
    throw UsageError("the section cocycle takes values in Z with the trivial action");
  if (config_.inject_fault && coeffs_.dimension() == 0) throw UsageError("cannot inject a fault into A = 0");

  ball_ = std::make_shared<const CayleyBall>(CayleyBall::build(surface_, config_.radius + 1));
  std::shared_ptr<const Cocycle> sigma;
  if (section_cocycle())
    sigma = std::make_shared<SectionCocycle>(ball_);
  else
    sigma = std::make_shared<ZeroCocycle>(ball_, coeffs_, *action_);
  if (config_.inject_fault) {
    const ElementId a1 = ball_->neighbor(ball_->identity(), surface_->group.letter(1, false));
    const ElementId b1 = ball_->neighbor(ball_->identity(), surface_->group.letter(1, true));
    sigma = std::make_shared<FaultInjected>(sigma, a1, b1, coeffs_.unit(0));
  }
  sigma_ = std::move(sigma);
  if (!config_.subgroup.empty()) subgroup_cosets();  // validates early
}

const std::vector<std::string>& Verifier::suites() {
  static const std::vector<std::string> names{"all", "cocycle", "geometry", "automata", "extension", "transfer"};
  return names;
}

std::vector<CheckResult> Verifier::run(const std::string& suite) {
  struct Entry {
    const char* id;
    const char* title;
    CheckResult (Verifier::*fn)();
    const char* suite;
  };
  static const Entry entries[] = {
      {"cocycle-identity", "twisted cocycle identity", &Verifier::cocycle_identity, "cocycle"},
      {"closed-form", "closed form and turning number sign rule", &Verifier::closed_form, "cocycle"},
      {"loop-identity", "turn/relator identity on trivial words", &Verifier::loop_identity, "geometry"},
      {"extension-arithmetic", "extension relator, associativity, centrality", &Verifier::extension_arithmetic,
       "extension"},
      {"weak-boundedness", "value sets, level-set automata, end tuples", &Verifier::weak_boundedness, "cocycle"},
      {"geometry-oracle", "combinatorial turns against the isometry model", &Verifier::geometry_oracle, "geometry"},
      {"fellow-travellers", "fellow travelling of L and L', section distances", &Verifier::fellow_travellers,
       "extension"},
      {"automata", "automata operations against enumeration", &Verifier::automata, "automata"},
      {"transfer", "transfer to a finite-index subgroup", &Verifier::transfer, "transfer"},
      {"ball-counts", "ball sizes and half-relator identifications", &Verifier::ball_counts, "geometry"},
  };
  if (std::find(suites().begin(), suites().end(), suite) == suites().end())
    throw UsageError("unknown suite '" + suite + "'");
  std::vector<CheckResult> out;
  for (const auto& e : entries)
    if (suite == "all" || suite == e.suite) out.push_back(guarded(e.id, e.title, e.fn));
  return out;
}

CheckResult Verifier::guarded(const std::string& id, const std::string& title, CheckResult (Verifier::*check)()) {
  CheckResult r;
  try {
    r = (this->*check)();
  } catch (const ResourceError&) {
    throw;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = {{"error", e.what()}};
  }
  r.id = id;
  r.title = title;
  return r;
}

Json Verifier::format_triple(const Triple& t) const {
  const auto& g = surface_->group;
  return Json::array({g.format(ball_->word(t.g1)), g.format(ball_->word(t.g2)), g.format(ball_->word(t.g3))});
}

const WordAcceptor& Verifier::acceptor() {
  if (!acceptor_) {
    WordAcceptor acc = build_word_acceptor(*ball_, config_.radius);
    if (!acceptor_matches_ball(acc.dfa, *ball_, ball_->radius()))
      throw UsageError("radius " + std::to_string(config_.radius) +
                       " is too small: the word acceptor does not predict the next sphere");
    acceptor_ = std::move(acc);
  }
  return *acceptor_;
}

const std::vector<LevelSetMachines>& Verifier::level_set_machines() {
  if (!machines_) {
    std::vector<LevelSetMachines> m;
    for (Letter x = 0; x < ball_->num_letters(); ++x)
      m.push_back(build_level_set_machines(*sigma_, acceptor(), x, config_.radius));
    machines_ = std::move(m);
  }
  return *machines_;
}

const Extension& Verifier::extension() {
  if (!extension_) extension_ = std::make_unique<Extension>(sigma_);
  return *extension_;
}

const YAlphabet& Verifier::y_alphabet() {
  if (!y_) {
    std::vector<std::vector<Coeff>> values;
    for (const auto& m : level_set_machines()) {
      values.emplace_back();
      for (const auto& [a, dfa] : m.dfas) values.back().push_back(a);
    }
    y_ = std::make_unique<YAlphabet>(extension(), values);
  }
  return *y_;
}

const FiberLanguage& Verifier::fiber_language() {
  if (!fiber_) fiber_ = std::make_unique<FiberLanguage>(coeffs_);
  return *fiber_;
}

const fsa::Dfa& Verifier::lifted() {
  if (!lifted_) lifted_ = lifted_language(acceptor().dfa, level_set_machines(), y_alphabet());
  return *lifted_;
}

std::shared_ptr<const CosetStructure> Verifier::subgroup_cosets() const {
  if (config_.subgroup.empty())
    return std::make_shared<const CosetStructure>(CosetStructure::index_two(ball_, {surface_->group.letter(1, false)}));
  try {
    return std::make_shared<const CosetStructure>(ball_, config_.subgroup);
  } catch (const std::exception& e) {
    throw UsageError(std::string("subgroup: ") + e.what());
  }
}

// ---------------------------------------------------------------------

CheckResult Verifier::cocycle_identity() {
  CheckResult r;
  std::mt19937_64 rng(config_.seed);
  auto witnesses = [&](const IdentityReport& rep) {
    Json w = Json::array();
    for (const auto& v : rep.witnesses)
      w.push_back({{"triple", format_triple(v.triple)}, {"lhs", coeff_json(v.lhs)}, {"rhs", coeff_json(v.rhs)}});
    return w;
  };
  const auto exhaustive = check_cocycle_identity(*sigma_, exhaustive_triples(*ball_, 2));
  const auto random = check_cocycle_identity(*sigma_, random_triples(*ball_, 4, 10'000, rng));
  r.passed = exhaustive.passed() && exhaustive.skipped == 0 && random.passed() && random.checked == 10'000;
  r.detail = {{"exhaustive_length", 2},
              {"exhaustive", {{"checked", exhaustive.checked}, {"skipped", exhaustive.skipped},
                              {"violations", exhaustive.violations}, {"witnesses", witnesses(exhaustive)}}},
              {"random_length", 4},
              {"random", {{"checked", random.checked}, {"skipped", random.skipped}, {"violations", random.violations},
                          {"witnesses", witnesses(random)}}}};
  return r;
}

CheckResult Verifier::closed_form() {
  CheckResult r;
  if (!section_cocycle() || config_.inject_fault) {
    r.passed = true;
    r.detail = {{"applicable", false}};
    return r;
  }
  std::size_t pairs = 0, mismatches = 0, rule_applied = 0, rule_failures = 0, tau_too_large = 0;
  int max_tau = 0;
  long double max_rounding = 0;
  Json witnesses = Json::array();
  for (ElementId g : ball_->elements_up_to(config_.radius))
    for (Letter x = 0; x < ball_->num_letters(); ++x) {
      const ElementId xe = ball_->neighbor(ball_->identity(), x);
      const ClosedForm cf = sigma_closed_form(*ball_, g, xe);
      const auto s = sigma_->value(g, xe);
      ++pairs;
      max_tau = std::max(max_tau, std::abs(cf.tau));
      max_rounding = std::max(max_rounding, std::abs(cf.tau_numeric - static_cast<long double>(cf.tau)));
      if (std::abs(cf.tau) > 2) ++tau_too_large;
      const bool equal = s && (*s)[0] == cf.sigma;
      if (!equal) {
        ++mismatches;
        if (witnesses.size() < 10)
          witnesses.push_back({{"g", surface_->group.format(ball_->word(g))},
                               {"x", surface_->group.letter_name(x)},
                               {"sigma", s ? Json((*s)[0]) : Json(nullptr)},
                               {"closed_form", cf.sigma}});
      }
      if (cf.sign_rule_tau) {
        ++rule_applied;
        if (*cf.sign_rule_tau != cf.tau) ++rule_failures;
      }
    }
  r.passed = pairs > 0 && mismatches == 0 && tau_too_large == 0 && rule_failures == 0 && rule_applied > 0 &&
             max_rounding < 1e-6L;
  r.detail = {{"pairs", pairs},
              {"mismatches", mismatches},
              {"max_abs_tau", max_tau},
              {"max_tau_rounding", static_cast<double>(max_rounding)},
              {"sign_rule_applied", rule_applied},
              {"sign_rule_failures", rule_failures},
              {"witnesses", witnesses}};
  return r;
}

CheckResult Verifier::loop_identity() {
  CheckResult r;
  const auto& s = *surface_;
  const int g = config_.genus;
  const std::int64_t k = SectionCocycle::k_of_genus(g);
  std::mt19937_64 rng(config_.seed + 3);
  auto holds = [&](const LoopAnalysis& a) {
    const auto tau = std::llround(a.tau_numeric);
    return a.consistent && a.n + a.theta_n == k * a.N + 4LL * g * tau;
  };
  const LoopAnalysis rel = analyze_loop(s.group.relator(), s.group, s.turns, s.model);
  bool relator_ok = holds(rel) && rel.N == 1;
  if (g == 2) relator_ok = relator_ok && rel.n == 21 && rel.n + rel.theta_n == 24 && rel.tau == 1;
  std::size_t words = 0, failures = 0;
  Json witnesses = Json::array();
  for (; words < 1000; ++words) {
    const LoopAnalysis a = analyze_loop(random_trivial_word(s.group, rng), s.group, s.turns, s.model);
    if (!holds(a)) {
      ++failures;
      if (witnesses.size() < 10)
        witnesses.push_back({{"word", s.group.format(a.word)}, {"n", a.n}, {"theta_n", a.theta_n}, {"N", a.N},
                             {"tau_numeric", static_cast<double>(a.tau_numeric)}});
    }
  }
  r.passed = relator_ok && failures == 0;
  r.detail = {{"relator", {{"n", rel.n}, {"theta_n", rel.theta_n}, {"total", rel.n + rel.theta_n}, {"N", rel.N},
                           {"tau", rel.tau ? Json(*rel.tau) : Json(nullptr)}, {"k", k}}},
              {"random_words", words},
              {"failures", failures},
              {"witnesses", witnesses}};
  return r;
}

CheckResult Verifier::extension_arithmetic() {
  CheckResult r;
  const Extension& ext = extension();
  const auto& coeffs = coeffs_;
  std::mt19937_64 rng(config_.seed + 4);

  const ExtElement rel = relator_product(ext);
  const std::int64_t k = SectionCocycle::k_of_genus(config_.genus);
  bool relator_ok = true;
  if (section_cocycle() && !config_.inject_fault) relator_ok = rel == ext.fiber(Coeff{k});

  const auto elements = ball_->elements_up_to(2);
  std::uniform_int_distribution<std::size_t> pick(0, elements.size() - 1);
  std::uniform_int_distribution<std::int64_t> value(-5, 5);
  auto random_element = [&]() {
    Coeff a = coeffs.zero();
    for (auto& c : a) c = value(rng);
    return ExtElement{elements[pick(rng)], coeffs.normalize(a)};
  };
  std::size_t assoc_failures = 0, inverse_failures = 0, fiber_failures = 0, projection_failures = 0;
  Json witness = nullptr;
  for (int i = 0; i < 10'000; ++i) {
    const ExtElement p = random_element(), q = random_element(), s = random_element();
    const ExtElement pq = ext.mul(p, q);
    if (pq.base != *ball_->multiply(p.base, q.base)) ++projection_failures;
    if (ext.mul(pq, s) != ext.mul(p, ext.mul(q, s))) {
      if (!assoc_failures) witness = {ext.format(p), ext.format(q), ext.format(s)};
      ++assoc_failures;
    }
  }
  for (int i = 0; i < 100; ++i) {
    const ExtElement p = random_element();
    if (ext.mul(p, ext.inverse(p)) != ext.identity() || ext.mul(ext.inverse(p), p) != ext.identity()) ++inverse_failures;
    const ExtElement a = ext.fiber(p.fiber), b = ext.fiber(random_element().fiber);
    if (ext.mul(a, b) != ext.fiber(coeffs.add(a.fiber, b.fiber))) ++fiber_failures;
  }
  const CentralityReport central = centrality_check(ext, 3);
  const bool central_ok = central.central == action_->is_trivial();

  r.passed = relator_ok && assoc_failures == 0 && inverse_failures == 0 && fiber_failures == 0 &&
             projection_failures == 0 && central_ok;
  r.detail = {{"relator_product", ext.format(rel)},
              {"relator_expected", section_cocycle() ? Json(k) : Json(nullptr)},
              {"associativity_triples", 10'000},
              {"associativity_failures", assoc_failures},
              {"associativity_witness", witness},
              {"inverse_failures", inverse_failures},
              {"fiber_failures", fiber_failures},
              {"projection_failures", projection_failures},
              {"central", central.central},
              {"action_trivial", action_->is_trivial()},
              {"centrality_checked", central.checked}};
  if (central.witness) r.detail["centrality_witness"] = {ext.format(central.witness->first), ext.format(central.witness->second)};
  return r;
}

CheckResult Verifier::weak_boundedness() {
  CheckResult r;
  const int R = config_.radius;
  const WeakBoundednessReport wb = weak_boundedness_report(*sigma_, R + 1);
  const std::int64_t bound = 14LL * config_.genus;
  bool bound_ok = !section_cocycle() || config_.inject_fault || wb.max_abs <= bound;

  Json letters = Json::array();
  bool machines_ok = true, tuples_ok = true;
  const auto& current = level_set_machines();
  for (Letter x = 0; x < ball_->num_letters(); ++x) {
    const LevelSetMachines& m = current[static_cast<std::size_t>(x)];
    const LevelSetMachines next = build_level_set_machines(*sigma_, acceptor(), x, R + 1);
    bool stable = m.dfas.size() == next.dfas.size();
    for (std::size_t i = 0; stable && i < m.dfas.size(); ++i)
      stable = m.dfas[i].first == next.dfas[i].first && m.dfas[i].second == next.dfas[i].second;

    const auto sets = level_sets(*sigma_, x, ball_->radius());
    bool matches = sets.size() == m.dfas.size();
    for (const auto& [a, dfa] : m.dfas) {
      auto it = sets.find(a);
      matches = matches && it != sets.end() && dfa_matches_elements(dfa, *ball_, it->second, R);
    }
    const TupleClassification tuples = classify_by_end_tuple(*sigma_, x, R);
    const bool ok = stable && matches && m.classifier.complete && m.conflicting_states == 0 && m.unclassified_states == 0;
    machines_ok = machines_ok && ok;
    tuples_ok = tuples_ok && tuples.consistent();

    const ValueSetEntry& e = wb.entries[static_cast<std::size_t>(x)];
    Json values = Json::array();
    for (const auto& [a, dfa] : m.dfas) values.push_back(coeff_json(a));
    letters.push_back({{"letter", surface_->group.letter_name(x)},
                       {"right_values", e.right.size()},
                       {"left_values", e.left.size()},
                       {"levels", values},
                       {"dfa_states", [&] {
                          Json s = Json::array();
                          for (const auto& [a, dfa] : m.dfas) s.push_back(dfa.num_states());
                          return s;
                        }()},
                       {"stable", stable},
                       {"matches_enumeration", matches},
                       {"classifier_complete", m.classifier.complete},
                       {"tuples", tuples.values.size()},
                       {"tuple_conflicts", tuples.conflicts.size()}});
  }
  r.passed = wb.stabilized && bound_ok && machines_ok && tuples_ok;
  r.detail = {{"radii", {R, R + 1}},
              {"value_sets_stable", wb.stabilized},
              {"max_abs", wb.max_abs},
              {"bound", section_cocycle() ? Json(bound) : Json(nullptr)},
              {"level_sets_ok", machines_ok},
              {"tuples_consistent", tuples_ok},
              {"letters", letters}};
  return r;
}

CheckResult Verifier::geometry_oracle() {
  CheckResult r;
  const auto& s = *surface_;
  const int g = config_.genus;
  const int letters = 4 * g;

  // Turns at single vertices and along every word of the outer sphere.
  long double max_residual = 0;
  std::size_t turns_checked = 0, turn_mismatches = 0;
  for (Letter a = 0; a < letters; ++a)
    for (Letter b = 0; b < letters; ++b) {
      const NumericPath p = numeric_oracle(Word{a, b}, s.model);
      const long double m = p.turns.at(0) * static_cast<long double>(2 * g) / kPi;
      max_residual = std::max(max_residual, std::abs(m - static_cast<long double>(s.turns(a, b))));
      ++turns_checked;
      if (snap_turn(p.turns[0], g) != s.turns(a, b)) ++turn_mismatches;
    }
  const int R = config_.radius;
  for (std::size_t e = ball_->sphere_begin(R); e < ball_->sphere_end(R); ++e) {
    const Word& w = ball_->word(static_cast<ElementId>(e));
    const NumericPath p = numeric_oracle(w, s.model);
    max_residual = std::max(max_residual, p.max_snap_residual);
    for (std::size_t k = 1; k < w.size(); ++k) {
      ++turns_checked;
      if (snap_turn(p.turns[k - 1], g) != s.turns(w[k - 1], w[k])) ++turn_mismatches;
    }
  }

  // Areas of closed loops against the relator count.
  std::mt19937_64 rng(config_.seed + 6);
  long double max_area_error = 0;
  std::size_t loops = 0;
  auto measure = [&](const Word& w) {
    const LoopAnalysis a = analyze_loop(w, s.group, s.turns, s.model);
    max_area_error = std::max(max_area_error, std::abs(a.N_numeric - static_cast<long double>(a.N)));
    ++loops;
  };
  measure(s.group.relator());
  for (int i = 0; i < 1000; ++i) measure(random_trivial_word(s.group, rng));

  // Vertex link: a single cycle through all 4g germs, wedges of pi/2g.
  const auto& cycle = s.link.cycle();
  std::set<Letter> distinct(cycle.begin(), cycle.end());
  bool single_cycle = static_cast<int>(cycle.size()) == letters && static_cast<int>(distinct.size()) == letters;
  int wedge_units = 0;
  long double wedge_sum = 0, max_wedge_error = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Letter a = cycle[i], b = cycle[(i + 1) % cycle.size()];
    wedge_units += ((s.link.position(b) - s.link.position(a)) % letters + letters) % letters;
    const long double da = *Model::direction(s.model.generator(a)), db = *Model::direction(s.model.generator(b));
    long double wedge = std::fmod(db - da, 2 * kPi);
    if (wedge < 0) wedge += 2 * kPi;
    wedge_sum += wedge;
    max_wedge_error = std::max(max_wedge_error, std::abs(wedge - kPi / static_cast<long double>(2 * g)));
  }
  const bool link_ok = single_cycle && wedge_units == letters && max_wedge_error < 1e-6L &&
                       std::abs(wedge_sum - 2 * kPi) < 1e-6L;

  r.passed = turn_mismatches == 0 && max_residual < 1e-6L && max_area_error < 1e-3L && link_ok;
  r.detail = {{"turns_checked", turns_checked},
              {"turn_mismatches", turn_mismatches},
              {"max_snap_residual", static_cast<double>(max_residual)},
              {"loops", loops},
              {"max_area_error", static_cast<double>(max_area_error)},
              {"link_cycle_length", cycle.size()},
              {"single_cycle", single_cycle},
              {"wedge_units", wedge_units},
              {"wedge_sum", static_cast<double>(wedge_sum)},
              {"max_wedge_error", static_cast<double>(max_wedge_error)}};
  return r;
}

CheckResult Verifier::fellow_travellers() {
  CheckResult r;
  const int R = config_.radius;
  const auto l_prev = language_fellow_traveller(*ball_, R);
  const auto l_next = language_fellow_traveller(*ball_, R + 1);
  const bool l_ok = l_prev.pairs > 0 && l_prev.skipped == 0 && l_next.skipped == 0 && l_prev.delta == l_next.delta;

  const Extension& ext = extension();
  const YAlphabet& y = y_alphabet();
  const FiberLanguage& fiber = fiber_language();
  const auto k_prev = lifted_fellow_traveller(ext, y, fiber, R - 1);
  const auto k_next = lifted_fellow_traveller(ext, y, fiber, R);
  const bool k_ok = k_prev.pairs > 0 && k_next.skipped == 0 && k_prev.k == k_next.k;

  const MEvaluator eval(ext, y, fiber);
  std::mt19937_64 rng(config_.seed + 7);
  const auto dist = section_distance_check(ext, y, eval, (R + 1) / 2, 500, rng);
  const bool d_ok = dist.passed() && dist.checked == 500;

  r.passed = l_ok && k_ok && d_ok && y.symmetric(ext);
  r.detail = {{"language", {{"radii", {R, R + 1}}, {"delta", {l_prev.delta, l_next.delta}},
                            {"pairs", {l_prev.pairs, l_next.pairs}}, {"skipped", {l_prev.skipped, l_next.skipped}}}},
              {"lifted", {{"radii", {R - 1, R}}, {"k_bound", {k_prev.k, k_next.k}},
                          {"pairs", {k_prev.pairs, k_next.pairs}}, {"skipped", {k_prev.skipped, k_next.skipped}}}},
              {"y_symbols", y.size()},
              {"y_symmetric", y.symmetric(ext)},
              {"section_distance", {{"checked", dist.checked}, {"skipped", dist.skipped},
                                    {"mismatches", dist.mismatches}}}};
  return r;
}

CheckResult Verifier::automata() {
  CheckResult r;
  std::mt19937_64 rng(config_.seed + 8);
  std::size_t op_checks = 0, op_failures = 0;
  Json failures = Json::array();
  auto expect = [&](bool ok, const std::string& what) {
    ++op_checks;
    if (!ok) {
      ++op_failures;
      if (failures.size() < 10) failures.push_back(what);
    }
  };

  // Boolean operations, concatenation, determinization and minimization.
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t k = trial % 2 ? 3 : 2;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(std::string(1, static_cast<char>('p' + i)));
    const fsa::Alphabet alpha(names);
    const fsa::Dfa a = random_dfa(alpha, 5, rng), b = random_dfa(alpha, 5, rng);
    const fsa::Dfa comp = fsa::complement(a), inter = fsa::intersect(a, b), uni = fsa::unite(a, b),
                   diff = fsa::difference(a, b), min = fsa::minimize(a);
    const fsa::Nfa cat = fsa::concatenate(a, b);
    const fsa::Dfa cat_dfa = fsa::minimize(fsa::determinize(cat));
    const fsa::Dfa round = fsa::determinize(fsa::to_nfa(a));
    bool ok = true;
    for (const auto& w : all_words(k, 8)) {
      const bool ia = a.accepts(w), ib = b.accepts(w);
      bool split = false;
      for (std::size_t i = 0; i <= w.size() && !split; ++i) {
        const std::span<const fsa::Symbol> span(w);
        split = a.accepts(span.subspan(0, i)) && b.accepts(span.subspan(i));
      }
      ok = ok && comp.accepts(w) == !ia && inter.accepts(w) == (ia && ib) && uni.accepts(w) == (ia || ib) &&
           diff.accepts(w) == (ia && !ib) && min.accepts(w) == ia && round.accepts(w) == ia &&
           cat.accepts(w) == split && cat_dfa.accepts(w) == split;
    }
    expect(ok, "boolean/concatenation trial " + std::to_string(trial));
    expect(fsa::minimize(min) == min, "minimize idempotent, trial " + std::to_string(trial));
    expect(fsa::to_text(fsa::minimize(fsa::complement(fsa::unite(a, b)))) ==
               fsa::to_text(fsa::minimize(fsa::intersect(fsa::complement(a), fsa::complement(b)))),
           "canonical encoding of equal languages, trial " + std::to_string(trial));
    expect(fsa::from_text(fsa::to_text(min)) == min, "text round trip, trial " + std::to_string(trial));
  }

  // Projection: padding only happens at the end, so a tape image of length
  // n is realized by a pair word of length at most n + states - 1 (the
  // overhang of the other tape can be pumped down inside one state).
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t base_size = trial % 2 ? 2 : 1;
    const int states = base_size == 1 ? 3 : 2;
    const std::size_t pair_length = base_size == 1 ? 8 : 6;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < base_size; ++i) names.push_back(std::string(1, static_cast<char>('p' + i)));
    const fsa::Alphabet base(names);
    const fsa::Dfa pair_dfa = fsa::minimize(
        fsa::intersect(random_dfa(fsa::TwoTapeAutomaton::pair_alphabet(base), states, rng), padding_language(base)));
    const fsa::TwoTapeAutomaton t(base, pair_dfa, fsa::TapeMode::Synchronous);
    for (fsa::Tape tape : {fsa::Tape::First, fsa::Tape::Second}) {
      std::set<fsa::SymbolWord> image;
      const auto pad = t.pad();
      for (const auto& pw : all_words(t.dfa().num_symbols(), pair_length)) {
        if (!t.dfa().accepts(pw)) continue;
        fsa::SymbolWord u;
        for (auto p : pw) {
          auto [x, y] = fsa::TwoTapeAutomaton::split_pair(base, p);
          const auto c = tape == fsa::Tape::First ? x : y;
          if (c != pad) u.push_back(c);
        }
        image.insert(u);
      }
      const fsa::Nfa proj = fsa::project(t, tape);
      bool ok = true;
      for (const auto& u : all_words(base_size, pair_length - static_cast<std::size_t>(states) + 1)) ok = ok && proj.accepts(u) == (image.count(u) > 0);
      expect(ok, "projection trial " + std::to_string(trial));
    }
  }

  // The lifted language on the sweep: exactly the lifts of canonical words,
  // each evaluating to its section value.
  const Extension& ext = extension();
  const YAlphabet& y = y_alphabet();
  const fsa::Dfa& lp = lifted();
  const MEvaluator eval(ext, y, fiber_language());
  const int R = config_.radius;
  std::set<fsa::SymbolWord> lifts;
  std::size_t section_failures = 0;
  for (ElementId g : ball_->elements_up_to(R)) {
    auto w = lift_word(ext, y, ball_->word(g));
    if (eval.evaluate(w) != ext.section(g)) ++section_failures;
    lifts.insert(std::move(w));
  }
  const auto enumerated = lp.enumerate(static_cast<std::size_t>(R));
  const bool lifted_ok = section_failures == 0 && enumerated.size() == lifts.size() &&
                         std::all_of(enumerated.begin(), enumerated.end(), [&](const auto& w) { return lifts.count(w) > 0; });
  expect(lifted_ok, "lifted language on the sweep");
  expect(fsa::to_text(fsa::minimize(fsa::determinize(fsa::to_nfa(lp)))) == fsa::to_text(lp),
         "canonical encoding of the lifted language");

  r.passed = op_failures == 0;
  r.detail = {{"checks", op_checks},
              {"failures", op_failures},
              {"failed", failures},
              {"lifted_states", lp.num_states()},
              {"lifted_words", enumerated.size()},
              {"sweep_elements", lifts.size()},
              {"section_failures", section_failures}};
  return r;
}

CheckResult Verifier::transfer() {
  CheckResult r;
  const auto cosets = subgroup_cosets();
  auto t = std::make_shared<TransferCocycle>(sigma_, cosets);
  const auto identity = check_cocycle_identity(*t, exhaustive_triples(*ball_, 2));

  // Values over the sweep, where the transfer can be evaluated inside the ball.
  const int R = config_.radius;
  const std::int64_t bound = static_cast<std::int64_t>(cosets->index()) * 14LL * config_.genus;
  std::int64_t max_abs = 0;
  std::size_t evaluated = 0, unavailable = 0;
  bool stable = true;
  for (Letter x = 0; x < ball_->num_letters(); ++x) {
    const ElementId xe = ball_->neighbor(ball_->identity(), x);
    std::set<Coeff> sets[2][2];  // [radius R-1 / R][right / left]
    for (ElementId g : ball_->elements_up_to(R)) {
      const int level = ball_->length(g) < R ? 0 : 1;
      for (int side = 0; side < 2; ++side) {
        const auto v = side == 0 ? t->value(g, xe) : t->value(xe, g);
        if (!v) {
          ++unavailable;
          continue;
        }
        ++evaluated;
        max_abs = std::max(max_abs, free_abs_max(coeffs_, *v));
        sets[1][side].insert(*v);
        if (level == 0) sets[0][side].insert(*v);
      }
    }
    stable = stable && sets[0][0] == sets[1][0] && sets[0][1] == sets[1][1];
  }
  const bool bounded = config_.inject_fault || max_abs <= bound;

  // Index one: the transfer is the identity transform.
  auto t1 = std::make_shared<TransferCocycle>(sigma_, std::make_shared<const CosetStructure>(CosetStructure::trivial(ball_)));
  std::size_t index_one_pairs = 0, index_one_failures = 0;
  for (ElementId g1 : ball_->elements_up_to(3))
    for (ElementId g2 : ball_->elements_up_to(2)) {
      const auto a = t1->value(g1, g2), b = sigma_->value(g1, g2);
      if (!b) continue;
      ++index_one_pairs;
      if (a != b) ++index_one_failures;
    }

  Json witnesses = Json::array();
  for (const auto& w : identity.witnesses)
    witnesses.push_back({{"triple", format_triple(w.triple)}, {"lhs", coeff_json(w.lhs)}, {"rhs", coeff_json(w.rhs)}});
  r.passed = identity.passed() && evaluated > 0 && bounded && index_one_pairs > 0 && index_one_failures == 0;
  r.detail = {{"index", cosets->index()},
              {"identity", {{"checked", identity.checked}, {"skipped", identity.skipped},
                            {"violations", identity.violations}, {"witnesses", witnesses}}},
              {"sweep_radius", R},
              {"values_evaluated", evaluated},
              {"values_unavailable", unavailable},
              {"max_abs", max_abs},
              {"bound", bound},
              {"value_sets_stable", stable},
              {"index_one_pairs", index_one_pairs},
              {"index_one_failures", index_one_failures}};
  return r;
}

CheckResult Verifier::ball_counts() {
  CheckResult r;
  const int g = config_.genus;
  const std::size_t n = 4 * static_cast<std::size_t>(g);
  const std::size_t b1 = ball_->elements_up_to(1).size(), b2 = ball_->elements_up_to(2).size();
  const std::size_t free4 = n * (n - 1) * (n - 1) * (n - 1);
  const std::size_t s4 = ball_->sphere_size(4);
  const auto& st = ball_->stats().at(4);
  const std::size_t merges = st.same_length_merges + st.shorter_merges;
  const std::size_t oracle = half_relator_identifications(surface_->group, 4);
  r.passed = b1 == n + 1 && b2 == 1 + n + n * (n - 1) && s4 <= free4 && free4 - s4 == merges && merges == oracle &&
             (g != 2 || (b1 == 9 && b2 == 65 && s4 < free4));
  r.detail = {{"ball1", b1},   {"ball2", b2},       {"sphere4", s4},     {"free_words4", free4},
              {"deficit", free4 - s4}, {"bfs_merges", merges}, {"half_relator_identifications", oracle}};
  Json spheres = Json::array();
  for (int k = 0; k <= ball_->radius(); ++k) spheres.push_back(ball_->sphere_size(k));
  r.detail["spheres"] = spheres;
  return r;
}

Json report_json(const VerifyConfig& config, const std::vector<CheckResult>& checks) {
  Json out;
  out["config"] = {{"genus", config.genus},   {"radius", config.radius},   {"seed", config.seed},
                   {"rank", config.rank},     {"torsion", config.torsion}, {"cocycle", config.cocycle},
                   {"inject_fault", config.inject_fault}};
  bool passed = true;
  Json list = Json::array();
  for (const auto& c : checks) {
    passed = passed && c.passed;
    list.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}});
  }
  out["checks"] = list;
  out["passed"] = passed;
  return out;
}

}  // namespace regcocycle
