#include "regcocycle/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace regcocycle {

using nlohmann::json;

json ball_to_json(const CayleyBall& ball) {
  json words = json::array(), adjacency = json::array(), spheres = json::array();
  for (std::size_t e = 0; e < ball.size(); ++e) {
    words.push_back(ball.group().format(ball.word(static_cast<ElementId>(e))));
    json row = json::array();
    for (Letter x = 0; x < ball.num_letters(); ++x) row.push_back(ball.neighbor(static_cast<ElementId>(e), x));
    adjacency.push_back(std::move(row));
  }
  for (int k = 0; k <= ball.radius(); ++k) spheres.push_back(ball.sphere_size(k));
  return {{"genus", ball.genus()}, {"radius", ball.radius()}, {"spheres", spheres}, {"words", words},
          {"adjacency", adjacency}};
}

CayleyBall ball_from_json(const json& j) {
  try {
    auto surface = std::make_shared<const Surface>(j.at("genus").get<int>());
    std::vector<Word> words;
    for (const auto& w : j.at("words")) words.push_back(surface->group.parse(w.get<std::string>()));
    auto adjacency = j.at("adjacency").get<std::vector<std::vector<ElementId>>>();
    return CayleyBall::restore(surface, j.at("radius").get<int>(), words, adjacency);
  } catch (const json::exception& e) {
    throw FormatError(std::string("ball file: ") + e.what());
  }
}

std::string ball_to_dot(const CayleyBall& ball) {
  std::ostringstream out;
  out << "digraph ball {\n";
  for (std::size_t e = 0; e < ball.size(); ++e) {
    const std::string label = ball.group().format(ball.word(static_cast<ElementId>(e)));
    out << "  " << e << " [label=\"" << (label.empty() ? "1" : label) << "\"];\n";
  }
  for (std::size_t e = 0; e < ball.size(); ++e)
    for (Letter x = 0; x < ball.num_letters(); x += 2) {
      const ElementId t = ball.neighbor(static_cast<ElementId>(e), x);
      if (t != kNone) out << "  " << e << " -> " << t << " [label=\"" << ball.group().letter_name(x) << "\"];\n";
    }
  out << "}\n";
  return out.str();
}

void write_cocycle_jsonl(std::ostream& out, const TableCocycle& table) {
  const auto& group = table.ball().group();
  for (const auto& e : table.entries()) {
    const json line = {{"g1", group.format(table.ball().word(e.g1))},
                       {"g2", group.format(table.ball().word(e.g2))},
                       {"value", e.value},
                       {"provenance", e.provenance}};
    out << line.dump() << '\n';
  }
}

TableCocycle read_cocycle_jsonl(std::istream& in, std::shared_ptr<const CayleyBall> ball, const Coefficients& coeffs,
                                const FiniteAction& action) {
  TableCocycle table(ball, coeffs, action);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto g1 = ball->find(ball->group().parse(j.at("g1").get<std::string>()));
      const auto g2 = ball->find(ball->group().parse(j.at("g2").get<std::string>()));
      if (!g1 || !g2) throw FormatError("line " + std::to_string(number) + ": element outside the ball");
      table.set(*g1, *g2, j.at("value").get<Coeff>(), j.value("provenance", std::string("file")));
    } catch (const json::exception& e) {
      throw FormatError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return table;
}

json loop_to_json(const LoopAnalysis& a, const SurfaceGroup& group) {
  return {{"word", group.format(a.word)},
          {"n", a.n},
          {"theta_n", a.theta_n},
          {"N", a.N},
          {"tau", a.tau ? json(*a.tau) : json(nullptr)},
          {"area", static_cast<double>(a.area)},
          {"tau_numeric", static_cast<double>(a.tau_numeric)},
          {"N_numeric", static_cast<double>(a.N_numeric)},
          {"consistent", a.consistent}};
}

json ext_to_json(const Extension& ext, const ExtElement& p) {
  return {{"base", ext.ball().group().format(ext.ball().word(p.base))}, {"fiber", p.fiber}};
}

ExtElement ext_from_json(const Extension& ext, const json& j) {
  try {
    const auto base = ext.ball().find(ext.ball().group().parse(j.at("base").get<std::string>()));
    if (!base) throw OutOfBall("extension element base outside the ball");
    return {*base, ext.coefficients().normalize(j.at("fiber").get<Coeff>())};
  } catch (const json::exception& e) {
    throw FormatError(std::string("extension element: ") + e.what());
  }
}

namespace {

// Index into the a1, b1, a2, ... list for a generator name.
std::size_t generator_slot(const SurfaceGroup& group, const std::string& name) {
  const Word w = group.parse(name);
  if (w.size() != 1 || w[0] % 2 != 0) throw FormatError("'" + name + "' is not a generator a_i or b_i");
  return static_cast<std::size_t>(w[0] / 2);
}

}  // namespace

std::vector<Eigen::MatrixXi> parse_action(const json& j, const SurfaceGroup& group, std::size_t dimension) {
  if (!j.is_object()) throw FormatError("action file must be a JSON object");
  const auto n = static_cast<Eigen::Index>(dimension);
  std::vector<Eigen::MatrixXi> out(static_cast<std::size_t>(2 * group.genus()), Eigen::MatrixXi::Identity(n, n));
  for (const auto& [name, rows] : j.items()) {
    const std::size_t slot = generator_slot(group, name);
    if (!rows.is_array() || rows.size() != dimension) throw FormatError("matrix for " + name + " has the wrong size");
    Eigen::MatrixXi m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != dimension) throw FormatError("matrix for " + name + " has the wrong size");
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<int>();
    }
    out[slot] = m;
  }
  return out;
}

std::vector<std::vector<int>> parse_subgroup(const json& j, const SurfaceGroup& group) {
  if (!j.is_object() || j.empty()) throw FormatError("subgroup file must be a nonempty JSON object");
  std::size_t m = 0;
  for (const auto& [name, perm] : j.items()) {
    if (!perm.is_array() || perm.empty()) throw FormatError("image of " + name + " must be a nonempty array");
    if (m && perm.size() != m) throw FormatError("permutations must act on the same set");
    m = perm.size();
  }
  std::vector<int> identity(m);
  for (std::size_t i = 0; i < m; ++i) identity[i] = static_cast<int>(i);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(2 * group.genus()), identity);
  for (const auto& [name, perm] : j.items()) out[generator_slot(group, name)] = perm.get<std::vector<int>>();
  return out;
}

}  // namespace regcocycle
