// Command line driver: ball construction, verification suites and exports.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input
// error, 3 resource limit.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "regcocycle/io.hpp"
#include "regcocycle/verify.hpp"

namespace fs = std::filesystem;
using namespace regcocycle;

namespace {

constexpr int kPass = 0, kViolation = 1, kUsage = 2, kResource = 3;

struct Options {
  int genus = 2;
  int radius = 5;
  int rank = 1;
  std::vector<std::int64_t> torsion;
  std::string action_file;
  std::string subgroup_file;
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::string out;
  bool inject_fault = false;
  std::string cocycle = "section";
  std::string what = "acceptor";
  std::size_t element_limit = 4'000'000;
};

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

VerifyConfig make_config(const Options& o) {
  VerifyConfig c;
  c.genus = o.genus;
  c.radius = o.radius;
  c.seed = o.seed;
  c.rank = o.rank;
  c.torsion = o.torsion;
  c.cocycle = o.cocycle;
  c.inject_fault = o.inject_fault;
  if (c.genus < 2) throw UsageError("genus must be at least 2");
  const SurfaceGroup group(c.genus);
  if (!o.action_file.empty())
    c.action = parse_action(read_json(o.action_file), group, static_cast<std::size_t>(o.rank) + o.torsion.size());
  if (!o.subgroup_file.empty()) c.subgroup = parse_subgroup(read_json(o.subgroup_file), group);
  return c;
}

fs::path output_dir(const Options& o) {
  if (o.out.empty()) throw UsageError("--out is required");
  fs::create_directories(o.out);
  return o.out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

int cmd_ball(const Options& o) {
  if (o.genus < 2) throw UsageError("genus must be at least 2");
  if (o.radius < 0) throw UsageError("radius must be nonnegative");
  auto surface = std::make_shared<const Surface>(o.genus);
  const CayleyBall ball = CayleyBall::build(surface, o.radius, o.element_limit);
  for (const auto& s : ball.stats())
    std::cout << "sphere " << s.radius << ": " << s.size << " (extensions " << s.extensions << ", merged "
              << s.same_length_merges + s.shorter_merges << ")\n";
  std::cout << "elements " << ball.size() << "\n";
  if (!o.out.empty()) {
    const fs::path dir = output_dir(o);
    write_file(dir / "ball.json", ball_to_json(ball).dump() + "\n");
  }
  return kPass;
}

int cmd_verify(const Options& o) {
  Verifier v(make_config(o));
  const auto checks = v.run(o.suite);
  const nlohmann::json report = report_json(v.config(), checks);
  for (const auto& c : checks) {
    const bool applicable = !c.detail.contains("applicable") || c.detail["applicable"].get<bool>();
    std::cerr << (applicable ? (c.passed ? "PASS " : "FAIL ") : "SKIP ") << c.id << "  " << c.title << "\n";
  }
  if (o.out.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    write_file(output_dir(o) / "report.json", report.dump(2) + "\n");
  }
  return report["passed"].get<bool>() ? kPass : kViolation;
}

int cmd_export(const Options& o) {
  const fs::path dir = output_dir(o);
  if (o.what == "ball-dot") {
    if (o.genus < 2) throw UsageError("genus must be at least 2");
    if (o.radius < 0) throw UsageError("radius must be nonnegative");
    const CayleyBall ball = CayleyBall::build(std::make_shared<const Surface>(o.genus), o.radius);
    write_file(dir / "ball.dot", ball_to_dot(ball));
    std::cout << "wrote 1 file(s) to " << dir.string() << "\n";
    return kPass;
  }
  Verifier v(make_config(o));
  const CayleyBall& ball = v.ball();
  const auto& group = ball.group();
  std::size_t files = 0;
  auto emit = [&](const std::string& name, const std::string& text) {
    write_file(dir / name, text);
    ++files;
  };
  if (o.what == "acceptor") {
    emit("acceptor.fsa", fsa::to_text(v.acceptor().dfa));
    emit("acceptor.dot", fsa::to_dot(v.acceptor().dfa, "acceptor"));
  } else if (o.what == "level-sets") {
    for (const auto& m : v.level_set_machines())
      for (const auto& [a, dfa] : m.dfas) {
        std::string value;
        for (auto c : a) value += (value.empty() ? "" : "_") + std::to_string(c);
        emit("level_" + group.letter_name(m.letter) + "_" + value + ".fsa", fsa::to_text(dfa));
      }
  } else if (o.what == "comparator") {
    for (const auto& m : v.level_set_machines()) {
      const auto cmp = difference_comparator(ball, m.classifier.differences, ball.identity(),
                                             ball.neighbor(ball.identity(), m.letter));
      emit("comparator_" + group.letter_name(m.letter) + ".fsa", fsa::to_text(cmp.dfa()));
    }
  } else if (o.what == "M") {
    const fsa::Dfa& lifted = v.lifted();
    emit("lifted.fsa", fsa::to_text(lifted));
    emit("m.fsa", fsa::to_text(build_m(lifted, v.fiber_language())));
  } else if (o.what == "cocycle") {
    std::vector<std::pair<ElementId, ElementId>> pairs;
    for (ElementId g : ball.elements_up_to(o.radius))
      for (Letter x = 0; x < ball.num_letters(); ++x) pairs.emplace_back(g, ball.neighbor(ball.identity(), x));
    std::ostringstream out;
    write_cocycle_jsonl(out, tabulate(v.cocycle(), pairs));
    emit("cocycle.jsonl", out.str());
  } else if (o.what == "loops") {
    const Surface& s = ball.surface();
    std::mt19937_64 rng(o.seed);
    std::ostringstream out;
    out << loop_to_json(analyze_loop(group.relator(), group, s.turns, s.model), group).dump() << '\n';
    for (int i = 0; i < 100; ++i)
      out << loop_to_json(analyze_loop(random_trivial_word(group, rng), group, s.turns, s.model), group).dump() << '\n';
    emit("loops.jsonl", out.str());
  } else {
    throw UsageError("unknown export '" + o.what + "'");
  }
  std::cout << "wrote " << files << " file(s) to " << dir.string() << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular cocycles and biautomatic structures on surface groups"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--genus", o.genus, "surface genus (>= 2)");
    cmd->add_option("--radius", o.radius, "ball or sweep radius");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--seed", o.seed, "seed for randomized sweeps");
  };
  auto coefficients = [&](CLI::App* cmd) {
    cmd->add_option("--rank", o.rank, "free rank of A");
    cmd->add_option("--torsion", o.torsion, "torsion moduli of A")->delimiter(',');
    cmd->add_option("--action-file", o.action_file, "JSON matrices of the action per generator");
    cmd->add_option("--subgroup-file", o.subgroup_file, "JSON coset permutations per generator");
    cmd->add_option("--cocycle", o.cocycle, "section | zero");
    cmd->add_flag("--inject-fault", o.inject_fault, "alter one cocycle value");
  };

  auto* ball = app.add_subcommand("ball", "build a Cayley ball and print sphere sizes");
  common(ball);
  ball->add_option("--element-limit", o.element_limit, "abort beyond this many elements");

  auto* verify = app.add_subcommand("verify", "run verification suites");
  common(verify);
  coefficients(verify);
  verify->add_option("--suite", o.suite, "all|cocycle|geometry|automata|extension|transfer");

  auto* exp = app.add_subcommand("export", "export automata, balls and tables");
  common(exp);
  coefficients(exp);
  exp->add_option("--what", o.what, "acceptor|level-sets|comparator|ball-dot|M|cocycle|loops");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (ball->parsed()) return cmd_ball(o);
    if (verify->parsed()) return cmd_verify(o);
    return cmd_export(o);
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource limit: out of memory\n";
    return kResource;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const GroupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
}
