#include "regcocycle/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace regcocycle {

Coefficients::Coefficients(int rank, std::vector<std::int64_t> torsion) : rank_(rank) {
  if (rank < 0) throw CocycleError("coefficient rank must be non-negative");
  moduli_.assign(static_cast<std::size_t>(rank), 0);
  for (std::int64_t m : torsion) {
    if (m < 2) throw CocycleError("torsion moduli must be at least 2");
    moduli_.push_back(m);
  }
}

Coeff Coefficients::unit(std::size_t i, std::int64_t sign) const {
  Coeff a = zero();
  a.at(i) = sign;
  return normalize(std::move(a));
}

Coeff Coefficients::normalize(Coeff a) const {
  if (a.size() != dimension())
    throw CocycleError("coefficient has " + std::to_string(a.size()) + " coordinates, expected " +
                       std::to_string(dimension()));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (moduli_[i] > 0) a[i] = ((a[i] % moduli_[i]) + moduli_[i]) % moduli_[i];
  return a;
}

Coeff Coefficients::add(const Coeff& a, const Coeff& b) const {
  Coeff c(dimension());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.at(i) + b.at(i);
  return normalize(std::move(c));
}

Coeff Coefficients::sub(const Coeff& a, const Coeff& b) const {
  Coeff c(dimension());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.at(i) - b.at(i);
  return normalize(std::move(c));
}

Coeff Coefficients::neg(const Coeff& a) const { return sub(zero(), a); }

bool Coefficients::is_zero(const Coeff& a) const { return normalize(a) == zero(); }

std::string Coefficients::format(const Coeff& a) const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < a.size(); ++i) out << (i ? "," : "") << a[i];
  out << ')';
  return out.str();
}

// ---------------------------------------------------------------------

FiniteAction FiniteAction::trivial(const SurfaceGroup& group, const Coefficients& coeffs) {
  std::vector<Eigen::MatrixXi> matrices(static_cast<std::size_t>(2 * group.genus()),
                                        Eigen::MatrixXi::Identity(static_cast<Eigen::Index>(coeffs.dimension()),
                                                                  static_cast<Eigen::Index>(coeffs.dimension())));
  return from_matrices(group, coeffs, matrices);
}

FiniteAction FiniteAction::from_matrices(const SurfaceGroup& group, const Coefficients& coeffs,
                                         const std::vector<Eigen::MatrixXi>& matrices) {
  const auto d = static_cast<Eigen::Index>(coeffs.dimension());
  if (matrices.size() != static_cast<std::size_t>(2 * group.genus()))
    throw CocycleError("action needs one matrix per generator a_i, b_i");
  FiniteAction act;
  act.coeffs_ = coeffs;
  act.perm_.assign(static_cast<std::size_t>(group.num_letters()), {});
  act.sign_.assign(static_cast<std::size_t>(group.num_letters()), {});
  for (std::size_t j = 0; j < matrices.size(); ++j) {
    const Eigen::MatrixXi& m = matrices[j];
    if (m.rows() != d || m.cols() != d) throw CocycleError("action matrix has the wrong size");
    if ((m.array().abs() > 1).any() || (m.cwiseAbs().rowwise().sum().array() != 1).any() ||
        (m.cwiseAbs().colwise().sum().array() != 1).any())
      throw CocycleError("action matrices must be signed permutation matrices");
    std::vector<int> perm(static_cast<std::size_t>(d)), sign(static_cast<std::size_t>(d));
    std::vector<int> inv_perm(static_cast<std::size_t>(d)), inv_sign(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index k = 0; k < d; ++k) {
        if (m(i, k) == 0) continue;
        if (coeffs.moduli()[static_cast<std::size_t>(i)] != coeffs.moduli()[static_cast<std::size_t>(k)])
          throw CocycleError("action must map each coordinate to one with the same modulus");
        perm[static_cast<std::size_t>(i)] = static_cast<int>(k);
        sign[static_cast<std::size_t>(i)] = m(i, k);
        inv_perm[static_cast<std::size_t>(k)] = static_cast<int>(i);
        inv_sign[static_cast<std::size_t>(k)] = m(i, k);
      }
    if (!m.isIdentity()) act.trivial_ = false;
    const auto x = static_cast<std::size_t>(2 * j);
    act.perm_[x] = perm;
    act.sign_[x] = sign;
    act.perm_[x + 1] = inv_perm;
    act.sign_[x + 1] = inv_sign;
  }
  for (std::size_t i = 0; i < coeffs.dimension(); ++i) {
    const Coeff e = coeffs.unit(i);
    if (act.apply(e, group.relator()) != e) throw CocycleError("the relator does not act trivially");
  }
  return act;
}

Coeff FiniteAction::apply(const Coeff& a, Letter x) const {
  if (trivial_) return a;
  const auto& perm = perm_.at(static_cast<std::size_t>(x));
  const auto& sign = sign_[static_cast<std::size_t>(x)];
  Coeff b(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) b[static_cast<std::size_t>(perm[i])] += sign[i] * a[i];
  return coeffs_.normalize(std::move(b));
}

Coeff FiniteAction::apply(const Coeff& a, const Word& w) const {
  if (trivial_) return a;
  Coeff b = a;
  for (Letter x : w) b = apply(b, x);
  return b;
}

std::size_t FiniteAction::image_order() const {
  // Elements as signed permutations encoded 2*j + (sign < 0).
  const std::size_t d = coeffs_.dimension();
  std::vector<int> id(d);
  for (std::size_t i = 0; i < d; ++i) id[i] = static_cast<int>(2 * i);
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> queue{id};
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (std::size_t x = 0; x < perm_.size(); ++x) {
      std::vector<int> next(d);
      for (std::size_t i = 0; i < d; ++i) {
        const int j = queue[q][i] / 2;
        const bool neg = (queue[q][i] % 2) != 0;
        const int s = sign_[x][static_cast<std::size_t>(j)] * (neg ? -1 : 1);
        next[i] = 2 * perm_[x][static_cast<std::size_t>(j)] + (s < 0 ? 1 : 0);
      }
      if (seen.insert(next).second) queue.push_back(std::move(next));
    }
  return seen.size();
}

Eigen::MatrixXi FiniteAction::matrix(Letter x) const {
  const auto d = static_cast<Eigen::Index>(coeffs_.dimension());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    m(i, perm_.at(static_cast<std::size_t>(x))[static_cast<std::size_t>(i)]) =
        sign_[static_cast<std::size_t>(x)][static_cast<std::size_t>(i)];
  return m;
}

std::optional<Coeff> Cocycle::value_words(const Word& w1, const Word& w2, const Word& w3) const {
  const auto g1 = ball_->find(w1), g2 = ball_->find(w2);
  if (g1 && g2 && ball_->find(w3)) return value(*g1, *g2);
  return value_beyond_ball(w1, w2, w3);
}

// ---------------------------------------------------------------------

SectionCocycle::SectionCocycle(std::shared_ptr<const CayleyBall> ball)
    : Cocycle(ball, Coefficients(1, {}), FiniteAction::trivial(ball->group(), Coefficients(1, {}))) {
  n_.resize(ball->size());
  for (std::size_t e = 0; e < ball->size(); ++e)
    n_[e] = n_of_word(ball->word(static_cast<ElementId>(e)), ball->surface().turns);
}

std::optional<Coeff> SectionCocycle::value(ElementId g1, ElementId g2) const {
  const auto g3 = ball().multiply(g1, g2);
  if (!g3) return std::nullopt;
  const Word w = concat(concat(ball().word(g1), ball().word(g2)), inverse(ball().word(*g3)));
  const DehnResult dehn = ball().group().dehn_reduce(w);
  if (!dehn.reduced.empty()) throw CocycleError("relation word is not trivial: " + ball().group().format(w));
  return Coeff{k_of_genus(ball().genus()) * dehn.relator_count() + n(*g3) - n(g1) - n(g2)};
}

std::optional<Coeff> SectionCocycle::value_beyond_ball(const Word& w1, const Word& w2, const Word& w3) const {
  const Word w = concat(concat(w1, w2), inverse(w3));
  const DehnResult dehn = ball().group().dehn_reduce(w);
  if (!dehn.reduced.empty()) throw CocycleError("relation word is not trivial: " + ball().group().format(w));
  const TurnTable& turns = ball().surface().turns;
  return Coeff{k_of_genus(ball().genus()) * dehn.relator_count() + n_of_word(w3, turns) - n_of_word(w1, turns) -
               n_of_word(w2, turns)};
}

TableCocycle::TableCocycle(std::shared_ptr<const CayleyBall> ball, Coefficients coeffs, FiniteAction action)
    : Cocycle(std::move(ball), std::move(coeffs), std::move(action)) {}

void TableCocycle::set(ElementId g1, ElementId g2, Coeff value, std::string provenance) {
  values_[key(g1, g2)] = {coefficients().normalize(std::move(value)), std::move(provenance)};
}

std::optional<Coeff> TableCocycle::value(ElementId g1, ElementId g2) const {
  auto it = values_.find(key(g1, g2));
  if (it == values_.end()) return std::nullopt;
  return it->second.first;
}

std::vector<TableCocycle::Entry> TableCocycle::entries() const {
  std::vector<Entry> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_)
    out.push_back({static_cast<ElementId>(k >> 32), static_cast<ElementId>(k & 0xffffffffu), v.first, v.second});
  std::sort(out.begin(), out.end(),
            [](const Entry& a, const Entry& b) { return std::tie(a.g1, a.g2) < std::tie(b.g1, b.g2); });
  return out;
}

TableCocycle tabulate(const Cocycle& sigma, const std::vector<std::pair<ElementId, ElementId>>& pairs) {
  TableCocycle table(sigma.ball_ptr(), sigma.coefficients(), sigma.action());
  for (auto [g1, g2] : pairs)
    if (auto v = sigma.value(g1, g2)) table.set(g1, g2, *v, sigma.provenance());
  return table;
}

CoboundaryAdjusted::CoboundaryAdjusted(std::shared_ptr<const Cocycle> base, std::vector<Coeff> u)
    : Cocycle(base->ball_ptr(), base->coefficients(), base->action()), base_(std::move(base)), u_(std::move(u)) {
  if (u_.size() != ball().size()) throw CocycleError("coboundary function must be defined on the whole ball");
  for (auto& a : u_) a = coefficients().normalize(std::move(a));
}

std::optional<Coeff> CoboundaryAdjusted::value(ElementId g1, ElementId g2) const {
  auto v = base_->value(g1, g2);
  if (!v) return std::nullopt;
  const auto g12 = ball().multiply(g1, g2);
  if (!g12) return std::nullopt;
  const Coefficients& c = coefficients();
  return c.sub(c.add(c.add(*v, act(u_[static_cast<std::size_t>(g1)], g2)), u_[static_cast<std::size_t>(g2)]),
               u_[static_cast<std::size_t>(*g12)]);
}

std::vector<Coeff> random_function(const CayleyBall& ball, const Coefficients& coeffs, int bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  std::vector<Coeff> u(ball.size(), coeffs.zero());
  for (std::size_t e = 1; e < u.size(); ++e) {
    for (auto& v : u[e]) v = dist(rng);
    u[e] = coeffs.normalize(std::move(u[e]));
  }
  return u;
}

FaultInjected::FaultInjected(std::shared_ptr<const Cocycle> base, ElementId g1, ElementId g2, Coeff delta)
    : Cocycle(base->ball_ptr(), base->coefficients(), base->action()),
      base_(std::move(base)),
      g1_(g1),
      g2_(g2),
      delta_(coefficients().normalize(std::move(delta))) {}

std::optional<Coeff> FaultInjected::value(ElementId g1, ElementId g2) const {
  auto v = base_->value(g1, g2);
  if (v && g1 == g1_ && g2 == g2_) return coefficients().add(*v, delta_);
  return v;
}

// ---------------------------------------------------------------------

std::optional<int> sign_rule(int phi1, int phi2, int phi3) {
  if (phi1 < 0 && phi2 < 0 && phi3 < 0) return -1;
  if (phi3 < 0 || (phi1 < 0 && phi2 < 0)) return 0;
  return 1;
}

ClosedForm sigma_closed_form(const CayleyBall& ball, ElementId g1, ElementId g2) {
  const auto g3 = ball.multiply(g1, g2);
  if (!g3) throw CocycleError("product outside the ball");
  const TurnTable& turns = ball.surface().turns;
  const std::vector<Word> pieces{ball.word(g1), ball.word(g2), inverse(ball.word(*g3))};
  std::vector<const Word*> nonempty;
  for (const Word& p : pieces)
    if (!p.empty()) nonempty.push_back(&p);
  ClosedForm cf;
  if (nonempty.empty()) return cf;
  Word w;
  for (const Word* p : nonempty) w.insert(w.end(), p->begin(), p->end());
  for (std::size_t i = 0; i < nonempty.size(); ++i)
    cf.phi.push_back(turns(nonempty[i]->back(), nonempty[(i + 1) % nonempty.size()]->front()));
  const NumericPath num = numeric_oracle(w, ball.surface().model);
  cf.tau_numeric = num.turning_number;
  cf.tau = static_cast<int>(std::lround(num.turning_number));
  cf.sigma = -4LL * ball.genus() * cf.tau;
  for (int m : cf.phi) cf.sigma += m;
  if (!pieces[0].empty() && pieces[1].size() == 1 && !pieces[2].empty())
    cf.sign_rule_tau = sign_rule(cf.phi[0], cf.phi[1], cf.phi[2]);
  return cf;
}

// ---------------------------------------------------------------------

IdentityReport check_cocycle_identity(const Cocycle& sigma, const std::vector<Triple>& triples,
                                      std::size_t max_witnesses) {
  const CayleyBall& ball = sigma.ball();
  const Coefficients& c = sigma.coefficients();
  IdentityReport report;
  for (const Triple& t : triples) {
    const auto g12 = ball.multiply(t.g1, t.g2);
    const auto g23 = ball.multiply(t.g2, t.g3);
    if (!g12 || !g23) {
      ++report.skipped;
      continue;
    }
    const auto s12 = sigma.value(t.g1, t.g2);
    const auto s12_3 = sigma.value(*g12, t.g3);
    const auto s23 = sigma.value(t.g2, t.g3);
    const auto s1_23 = sigma.value(t.g1, *g23);
    if (!s12 || !s12_3 || !s23 || !s1_23) {
      ++report.skipped;
      continue;
    }
    ++report.checked;
    Coeff lhs = c.add(sigma.act(*s12, t.g3), *s12_3);
    Coeff rhs = c.add(*s23, *s1_23);
    if (lhs != rhs) {
      ++report.violations;
      if (report.witnesses.size() < max_witnesses) report.witnesses.push_back({t, std::move(lhs), std::move(rhs)});
    }
  }
  return report;
}

std::vector<Triple> exhaustive_triples(const CayleyBall& ball, int max_length) {
  const auto n = static_cast<ElementId>(ball.sphere_end(std::min(max_length, ball.radius())));
  std::vector<Triple> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (ElementId a = 0; a < n; ++a)
    for (ElementId b = 0; b < n; ++b)
      for (ElementId c = 0; c < n; ++c) out.push_back({a, b, c});
  return out;
}

std::vector<Triple> random_triples(const CayleyBall& ball, int max_length, std::size_t count, std::mt19937_64& rng) {
  max_length = std::min(max_length, ball.radius());
  std::uniform_int_distribution<int> length(0, max_length);
  auto pick = [&]() {
    const int k = length(rng);
    std::uniform_int_distribution<std::size_t> idx(ball.sphere_begin(k), ball.sphere_end(k) - 1);
    return static_cast<ElementId>(idx(rng));
  };
  std::vector<Triple> out;
  const std::size_t attempts = 2000 * count + 100000;
  for (std::size_t i = 0; i < attempts && out.size() < count; ++i) {
    const Triple t{pick(), pick(), pick()};
    const auto g12 = ball.multiply(t.g1, t.g2);
    const auto g23 = ball.multiply(t.g2, t.g3);
    if (!g12 || !g23 || !ball.multiply(*g12, t.g3)) continue;
    out.push_back(t);
  }
  if (out.size() < count) throw CocycleError("could not sample enough testable triples in the ball");
  return out;
}

// ---------------------------------------------------------------------

std::vector<ElementId> right_domain(const CayleyBall& ball, Letter x, int radius) {
  std::vector<ElementId> out;
  for (ElementId g : ball.elements_up_to(radius)) {
    const ElementId gx = ball.neighbor(g, x);
    if (gx != kNone && ball.length(gx) <= radius) out.push_back(g);
  }
  return out;
}

namespace {

std::vector<Coeff> sorted_unique(std::vector<Coeff> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

ElementId letter_element(const CayleyBall& ball, Letter x) { return ball.neighbor(ball.identity(), x); }

Coeff require(const std::optional<Coeff>& v, const char* what) {
  if (!v) throw CocycleError(std::string("cocycle value outside the ball: ") + what);
  return *v;
}

}  // namespace

std::vector<Coeff> right_values(const Cocycle& sigma, Letter x, int radius) {
  std::vector<Coeff> out;
  const ElementId xe = letter_element(sigma.ball(), x);
  for (ElementId g : right_domain(sigma.ball(), x, radius)) out.push_back(require(sigma.value(g, xe), "σ(g, x)"));
  return sorted_unique(std::move(out));
}

std::vector<Coeff> left_values(const Cocycle& sigma, Letter x, int radius) {
  const CayleyBall& ball = sigma.ball();
  std::vector<Coeff> out;
  const ElementId xe = letter_element(ball, x);
  for (ElementId g : ball.elements_up_to(radius)) {
    const auto xg = left_multiply(ball, x, g);
    if (!xg || ball.length(*xg) > radius) continue;
    out.push_back(require(sigma.value(xe, g), "σ(x, g)"));
  }
  return sorted_unique(std::move(out));
}

WeakBoundednessReport weak_boundedness_report(const Cocycle& sigma, int radius) {
  if (radius < 1 || radius > sigma.ball().radius()) throw CocycleError("radius outside the ball");
  WeakBoundednessReport report;
  report.radius = radius;
  report.stabilized = true;
  const auto& moduli = sigma.coefficients().moduli();
  for (Letter x = 0; x < sigma.ball().num_letters(); ++x) {
    ValueSetEntry e;
    e.letter = x;
    e.right = right_values(sigma, x, radius);
    e.left = left_values(sigma, x, radius);
    e.right_previous = right_values(sigma, x, radius - 1);
    e.left_previous = left_values(sigma, x, radius - 1);
    if (e.right != e.right_previous || e.left != e.left_previous) report.stabilized = false;
    for (const auto* set : {&e.right, &e.left})
      for (const Coeff& v : *set)
        for (std::size_t i = 0; i < v.size(); ++i)
          if (moduli[i] == 0) report.max_abs = std::max(report.max_abs, v[i] < 0 ? -v[i] : v[i]);
    report.entries.push_back(std::move(e));
  }
  return report;
}

std::map<Coeff, std::vector<ElementId>> level_sets(const Cocycle& sigma, Letter x, int radius) {
  std::map<Coeff, std::vector<ElementId>> out;
  const ElementId xe = letter_element(sigma.ball(), x);
  for (ElementId g : right_domain(sigma.ball(), x, radius)) out[require(sigma.value(g, xe), "σ(g, x)")].push_back(g);
  return out;
}

TupleClassification classify_by_end_tuple(const Cocycle& sigma, Letter x, int radius) {
  const CayleyBall& ball = sigma.ball();
  const ElementId xe = letter_element(ball, x);
  TupleClassification out;
  out.letter = x;
  std::map<EndTuple, ElementId> first_seen;
  for (ElementId g : right_domain(ball, x, radius)) {
    const EndTuple t = end_tuple(ball.word(g), ball.word(ball.neighbor(g, x)), ball.num_letters());
    Coeff v = require(sigma.value(g, xe), "σ(g, x)");
    ++out.classified;
    auto [it, inserted] = out.values.try_emplace(t, v);
    if (inserted) {
      first_seen[t] = g;
    } else if (it->second != v) {
      out.conflicts.push_back({t, first_seen[t], g});
    }
  }
  return out;
}

LevelSetMachines build_level_set_machines(const Cocycle& sigma, const WordAcceptor& acceptor, Letter x,
                                          int data_radius) {
  const CayleyBall& ball = sigma.ball();
  LevelSetMachines m;
  m.letter = x;
  m.data_radius = data_radius;
  m.classifier = build_complete_classifier(ball, acceptor, x, data_radius);
  m.tuples = classify_by_end_tuple(sigma, x, data_radius);
  const fsa::Dfa& dfa = m.classifier.dfa;
  const auto n = static_cast<std::size_t>(dfa.num_states());
  auto unknown_tuple = [&](std::size_t s) {
    for (const EndTuple& t : m.classifier.tuples[s])
      if (!m.tuples.values.count(t)) return true;
    return false;
  };
  // Tuples not realized in the data: evaluate σ on the shortlex-least word
  // reaching the state and its reduced partner.
  {
    std::vector<fsa::StateId> parent(n, -1);
    std::vector<Letter> via(n, -1);
    std::vector<fsa::StateId> queue{dfa.start()};
    parent[static_cast<std::size_t>(dfa.start())] = dfa.start();
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const fsa::StateId s = queue[i];
      if (unknown_tuple(static_cast<std::size_t>(s))) {
        Word u;
        for (fsa::StateId c = s; c != dfa.start(); c = parent[static_cast<std::size_t>(c)])
          u.push_back(via[static_cast<std::size_t>(c)]);
        std::reverse(u.begin(), u.end());
        const Word w = shortlex_reduce(ball, acceptor, concat(u, Word{x}));
        const EndTuple t = end_tuple(u, w, ball.num_letters());
        const auto& state_tuples = m.classifier.tuples[static_cast<std::size_t>(s)];
        if (std::find(state_tuples.begin(), state_tuples.end(), t) != state_tuples.end() && !m.tuples.values.count(t))
          if (auto v = sigma.value_words(u, Word{x}, w)) {
            m.tuples.values.emplace(t, *v);
            ++m.extended_tuples;
          }
      }
      for (Letter a = 0; a < ball.num_letters(); ++a) {
        const fsa::StateId t = dfa.next(s, a);
        if (parent[static_cast<std::size_t>(t)] >= 0) continue;
        parent[static_cast<std::size_t>(t)] = s;
        via[static_cast<std::size_t>(t)] = a;
        queue.push_back(t);
      }
    }
  }
  std::vector<Coeff> values;
  for (const auto& [t, v] : m.tuples.values) values.push_back(v);
  values = sorted_unique(std::move(values));
  std::vector<int> state_value(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    const auto& tuples = m.classifier.tuples[s];
    if (tuples.empty()) continue;
    std::optional<Coeff> v;
    bool conflict = false;
    if (unknown_tuple(s)) {
      ++m.unclassified_states;
      continue;
    }
    for (const EndTuple& t : tuples) {
      const Coeff& tv = m.tuples.values.at(t);
      if (v && *v != tv) conflict = true;
      v = tv;
    }
    if (conflict) {
      ++m.conflicting_states;
    } else {
      state_value[s] = static_cast<int>(std::lower_bound(values.begin(), values.end(), *v) - values.begin());
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<char> accepting(n, 0);
    for (std::size_t s = 0; s < n; ++s) accepting[s] = state_value[s] == static_cast<int>(i) ? 1 : 0;
    m.dfas.emplace_back(values[i],
                        fsa::minimize(fsa::Dfa(dfa.alphabet(), dfa.start(), dfa.transitions(), std::move(accepting))));
  }
  return m;
}

bool dfa_matches_elements(const fsa::Dfa& dfa, const CayleyBall& ball, const std::vector<ElementId>& elements,
                          int radius) {
  std::vector<ElementId> sorted;
  for (ElementId e : elements)
    if (ball.length(e) <= radius) sorted.push_back(e);
  std::sort(sorted.begin(), sorted.end());
  const auto words = dfa.enumerate(static_cast<std::size_t>(radius));
  if (words.size() != sorted.size()) return false;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i] != ball.word(sorted[i])) return false;
  return true;
}

namespace {

using Partition = std::map<Coeff, std::vector<ElementId>>;

Partition partition_direct(const Cocycle& sigma, ElementId h, int domain_radius) {
  Partition out;
  for (ElementId g : sigma.ball().elements_up_to(domain_radius))
    out[require(sigma.value(g, h), "σ(g, h)")].push_back(g);
  return out;
}

Partition partition_recursive(const Cocycle& sigma, const Word& h, int radius) {
  const CayleyBall& ball = sigma.ball();
  const Coefficients& coeffs = sigma.coefficients();
  const int len = static_cast<int>(h.size());
  const int domain_radius = radius - len;
  if (len == 0) return {{coeffs.zero(), ball.elements_up_to(domain_radius)}};
  if (len == 1) return partition_direct(sigma, letter_element(ball, h[0]), domain_radius);
  const Letter y = h.back();
  const Word h1_word(h.begin(), h.end() - 1);
  const ElementId h1 = ball.walk(ball.identity(), h1_word);
  const auto h1_inv = ball.inverse(h1);
  if (h1 == kNone || !h1_inv) throw CocycleError("prefix outside the ball");
  const Partition by_h1 = partition_recursive(sigma, h1_word, radius);
  const Partition by_y = partition_recursive(sigma, Word{y}, radius);
  const Coeff correction = require(sigma.value(h1, letter_element(ball, y)), "σ(h1, y)");
  const auto domain_end = static_cast<ElementId>(ball.sphere_end(domain_radius));

  // {g : σ(g h1, y) = c} as the right translate of the level set by h1^-1.
  std::vector<std::pair<Coeff, std::vector<ElementId>>> translated;
  for (const auto& [c, set] : by_y) {
    std::vector<ElementId> t;
    for (ElementId k : set) {
      const auto g = ball.multiply(k, *h1_inv);
      if (g && *g < domain_end) t.push_back(*g);
    }
    std::sort(t.begin(), t.end());
    translated.emplace_back(c, std::move(t));
  }
  Partition out;
  for (const auto& [b, s_b] : by_h1) {
    std::vector<ElementId> restricted;
    for (ElementId g : s_b)
      if (g < domain_end) restricted.push_back(g);
    const Coeff b_y = sigma.action().apply(b, y);
    for (const auto& [c, t_c] : translated) {
      std::vector<ElementId> both;
      std::set_intersection(restricted.begin(), restricted.end(), t_c.begin(), t_c.end(), std::back_inserter(both));
      if (both.empty()) continue;
      auto& target = out[coeffs.sub(coeffs.add(b_y, c), correction)];
      target.insert(target.end(), both.begin(), both.end());
    }
  }
  for (auto& [a, set] : out) std::sort(set.begin(), set.end());
  return out;
}

}  // namespace

std::map<Coeff, std::vector<ElementId>> level_sets_general(const Cocycle& sigma, ElementId h, int radius) {
  const int len = sigma.ball().length(h);
  if (radius > sigma.ball().radius()) throw CocycleError("radius exceeds the ball");
  if (radius < len)
    throw CocycleError("level sets of σ(·, h) need radius at least " + std::to_string(len));
  return partition_recursive(sigma, sigma.ball().word(h), radius);
}

std::map<Coeff, std::vector<ElementId>> level_sets_direct(const Cocycle& sigma, ElementId h, int radius) {
  const int len = sigma.ball().length(h);
  if (radius > sigma.ball().radius() || radius < len) throw CocycleError("radius incompatible with the ball");
  return partition_direct(sigma, h, radius - len);
}

// ---------------------------------------------------------------------

CosetStructure::CosetStructure(std::shared_ptr<const CayleyBall> ball, std::vector<std::vector<int>> generator_images)
    : ball_(std::move(ball)) {
  const SurfaceGroup& group = ball_->group();
  if (generator_images.size() != static_cast<std::size_t>(2 * group.genus()))
    throw CocycleError("subgroup needs one permutation per generator a_i, b_i");
  const std::size_t m = generator_images[0].size();
  if (m == 0) throw CocycleError("permutation images must be nonempty");
  images_.assign(static_cast<std::size_t>(group.num_letters()), {});
  for (std::size_t j = 0; j < generator_images.size(); ++j) {
    const auto& p = generator_images[j];
    if (p.size() != m) throw CocycleError("permutations must act on the same set");
    std::vector<int> inv(m, -1);
    for (std::size_t i = 0; i < m; ++i) {
      if (p[i] < 0 || static_cast<std::size_t>(p[i]) >= m || inv[static_cast<std::size_t>(p[i])] >= 0)
        throw CocycleError("generator image is not a permutation");
      inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
    }
    images_[2 * j] = p;
    images_[2 * j + 1] = inv;
  }
  for (std::size_t i = 0; i < m; ++i) {
    int p = static_cast<int>(i);
    for (Letter x : group.relator()) p = images_[static_cast<std::size_t>(x)][static_cast<std::size_t>(p)];
    if (p != static_cast<int>(i)) throw CocycleError("the relator does not act trivially on the cosets");
  }
  reps_.assign(m, kNone);
  std::size_t found = 0;
  for (std::size_t e = 0; e < ball_->size() && found < m; ++e) {
    const int c = coset(static_cast<ElementId>(e));
    if (reps_[static_cast<std::size_t>(c)] == kNone) {
      reps_[static_cast<std::size_t>(c)] = static_cast<ElementId>(e);
      ++found;
    }
  }
  if (found < m) throw CocycleError("action is not transitive within the ball");
}

CosetStructure CosetStructure::trivial(std::shared_ptr<const CayleyBall> ball) {
  const int g = ball->genus();
  return CosetStructure(std::move(ball), std::vector<std::vector<int>>(static_cast<std::size_t>(2 * g), {0}));
}

CosetStructure CosetStructure::index_two(std::shared_ptr<const CayleyBall> ball, const std::vector<Letter>& odd) {
  const int g = ball->genus();
  std::vector<std::vector<int>> images(static_cast<std::size_t>(2 * g), {0, 1});
  for (Letter x : odd) images.at(static_cast<std::size_t>(x / 2)) = {1, 0};
  return CosetStructure(std::move(ball), std::move(images));
}

int CosetStructure::coset(const Word& w) const {
  int p = 0;
  for (Letter x : w) p = images_[static_cast<std::size_t>(x)][static_cast<std::size_t>(p)];
  return p;
}

TransferCocycle::TransferCocycle(std::shared_ptr<const Cocycle> base, std::shared_ptr<const CosetStructure> cosets)
    : Cocycle(base->ball_ptr(), base->coefficients(), base->action()),
      base_(std::move(base)),
      cosets_(std::move(cosets)) {}

std::optional<Coeff> TransferCocycle::value(ElementId g1, ElementId g2) const {
  const CayleyBall& b = ball();
  Coeff total = coefficients().zero();
  for (ElementId y : cosets_->representatives()) {
    const auto yg1 = b.multiply(y, g1);
    if (!yg1) return std::nullopt;
    const ElementId r1 = cosets_->representative(cosets_->coset(*yg1));
    const auto r1_inv = b.inverse(r1);
    const auto r1g2 = b.multiply(r1, g2);
    if (!r1_inv || !r1g2) return std::nullopt;
    const ElementId r2 = cosets_->representative(cosets_->coset(*r1g2));
    const auto r2_inv = b.inverse(r2);
    if (!r2_inv) return std::nullopt;
    const auto h1 = b.multiply(*yg1, *r1_inv);
    const auto h2 = b.multiply(*r1g2, *r2_inv);
    if (!h1 || !h2) return std::nullopt;
    if (!cosets_->in_subgroup(*h1) || !cosets_->in_subgroup(*h2))
      throw CocycleError("transfer evaluated the subgroup cocycle outside the subgroup");
    const auto v = base_->value(*h1, *h2);
    if (!v) return std::nullopt;
    total = coefficients().add(total, act(*v, r2));
  }
  return total;
}

}  // namespace regcocycle
