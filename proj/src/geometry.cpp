#include "regcocycle/geometry.hpp"

#include <string>

namespace regcocycle {

VertexLink::VertexLink(const SurfaceGroup& group) : genus_(group.genus()) {
  const Word& r = group.relator();
  const int n = group.num_letters();
  // The corner of the polygon between consecutive relator letters x, y
  // makes y the clockwise neighbour of x^-1 at the vertex.
  std::vector<Letter> next_ccw(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const Letter x = r[i];
    const Letter y = r[(i + 1) % r.size()];
    if (next_ccw[static_cast<std::size_t>(y)] >= 0) throw GeometryError("corner pairing assigns a germ twice");
    next_ccw[static_cast<std::size_t>(y)] = inverse_letter(x);
  }
  position_.assign(static_cast<std::size_t>(n), -1);
  Letter x = 0;
  for (int step = 0; step < n; ++step) {
    if (x < 0 || position_[static_cast<std::size_t>(x)] >= 0)
      throw GeometryError("vertex link is not a single cycle");
    position_[static_cast<std::size_t>(x)] = step;
    cycle_.push_back(x);
    x = next_ccw[static_cast<std::size_t>(x)];
  }
  if (x != 0) throw GeometryError("vertex link is not a single cycle");
}

TurnTable::TurnTable(const VertexLink& link) : genus_(link.genus()) {
  const int n = 4 * genus_;
  table_.resize(static_cast<std::size_t>(n * n));
  for (Letter in = 0; in < n; ++in)
    for (Letter out = 0; out < n; ++out) {
      // Counterclockwise wedges from the germ back along `in` to `out`.
      const int j = ((link.position(out) - link.position(inverse_letter(in))) % n + n) % n;
      table_[static_cast<std::size_t>(in * n + out)] = j == 0 ? 2 * genus_ : j - 2 * genus_;
    }
}

int n_of_word(const Word& w, const TurnTable& turns) {
  int n = 0;
  for (std::size_t i = 1; i < w.size(); ++i) n += turns(w[i - 1], w[i]);
  return n;
}

int closing_turn(const Word& w, const TurnTable& turns) {
  if (w.empty()) return 0;
  return turns(w.back(), w.front());
}

int snap_turn(long double angle, int genus) {
  return static_cast<int>(std::lround(angle * static_cast<long double>(2 * genus) / std::numbers::pi_v<long double>));
}

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

long double turn_angle(long double back, long double out) {
  long double t = std::remainder(out - back - kPi, 2 * kPi);
  if (t < -kPi + 1e-6L) t += 2 * kPi;
  return t;
}

long double require(const std::optional<long double>& d, std::size_t vertex) {
  if (!d) throw GeometryError("undefined direction at path vertex " + std::to_string(vertex));
  return *d;
}

}  // namespace

NumericPath numeric_oracle(const Word& w, const Model& model) {
  if (w.size() > 64) throw GeometryError("word too long for the numeric model");
  using M = Model::Matrix;
  const std::size_t n = w.size();
  std::vector<M> prefix{M::Identity()};
  for (Letter x : w) {
    prefix.push_back(prefix.back() * model.generator(x));
    if (!prefix.back().allFinite() || prefix.back().cwiseAbs().maxCoeff() > 1e30L)
      throw GeometryError("numerical conditioning failure at path vertex " + std::to_string(prefix.size() - 1));
  }

  NumericPath out;
  out.closed = Model::distance(prefix.back()) < 1e-6L;
  const int g = model.genus();
  auto record = [&](long double theta, std::size_t vertex) {
    out.turns.push_back(theta);
    const long double m = theta * static_cast<long double>(2 * g) / kPi;
    const long double residual = std::abs(m - std::round(m));
    if (residual > out.max_snap_residual) {
      out.max_snap_residual = residual;
      out.worst_vertex = vertex;
    }
  };
  for (std::size_t k = 1; k < n; ++k) {
    const M frame = Model::inverse(prefix[k]);
    const long double back = require(Model::direction(frame * prefix[k - 1]), k);
    const long double fwd = require(Model::direction(frame * prefix[k + 1]), k);
    record(turn_angle(back, fwd), k);
  }
  if (!out.closed || n == 0) return out;

  const M frame = Model::inverse(prefix[n]);
  record(turn_angle(require(Model::direction(frame * prefix[n - 1]), n), require(Model::direction(frame * prefix[1]), n)),
         n);

  // Fan of geodesic triangles (v0, vk, vk+1), each signed by its
  // orientation at v0, with area pi minus the angle sum.
  long double area = 0;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const M& P = prefix[k];
    const M& Q = prefix[k + 1];
    const M Pi = Model::inverse(P);
    const M Qi = Model::inverse(Q);
    if (Model::distance(P) < 1e-9L || Model::distance(Q) < 1e-9L || Model::distance(Pi * Q) < 1e-9L) continue;
    const long double s = std::remainder(require(Model::direction(Q), 0) - require(Model::direction(P), 0), 2 * kPi);
    const long double a1 = std::abs(
        std::remainder(require(Model::direction(Pi), k) - require(Model::direction(Pi * Q), k), 2 * kPi));
    const long double a2 = std::abs(
        std::remainder(require(Model::direction(Qi), k + 1) - require(Model::direction(Qi * P), k + 1), 2 * kPi));
    const long double tri = kPi - (std::abs(s) + a1 + a2);
    area += s > 0 ? tri : -tri;
  }
  out.area = area;
  long double total = 0;
  for (long double t : out.turns) total += t;
  out.turning_number = (total - area) / (2 * kPi);
  return out;
}

LoopAnalysis analyze_loop(const Word& w, const SurfaceGroup& group, const TurnTable& turns, const Model& model) {
  const DehnResult dehn = group.dehn_reduce(w);
  if (!dehn.reduced.empty()) throw GeometryError("word is not a closed path: " + group.format(w));
  const int g = group.genus();
  LoopAnalysis a;
  a.word = w;
  a.n = n_of_word(w, turns);
  a.theta_n = closing_turn(w, turns);
  a.N = dehn.relator_count();
  const int lhs = a.n + a.theta_n - 8 * g * (g - 1) * a.N;
  if (lhs % (4 * g) == 0) a.tau = lhs / (4 * g);
  const NumericPath num = numeric_oracle(w, model);
  a.area = num.area;
  a.tau_numeric = num.turning_number;
  a.N_numeric = num.area / (4 * (g - 1) * kPi);
  a.consistent = a.tau.has_value() && std::abs(a.tau_numeric - static_cast<long double>(*a.tau)) < 1e-6L;
  return a;
}

}  // namespace regcocycle
