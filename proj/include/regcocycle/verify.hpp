#ifndef REGCOCYCLE_VERIFY_HPP
#define REGCOCYCLE_VERIFY_HPP

// Verification suites shared by the command line tool and the acceptance
// runner. Each check returns a machine-readable detail record; failures
// carry witnesses.

#include <json.hpp>

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "regcocycle/extension.hpp"

namespace regcocycle {

using Json = nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  Json detail = Json::object();
};

struct VerifyConfig {
  int genus = 2;
  /// Sweep radius (at least 5); the ball is built one step larger.
  int radius = 5;
  std::uint64_t seed = 1;
  int rank = 1;
  std::vector<std::int64_t> torsion;
  /// Matrices for a_1, b_1, ..., a_g, b_g; empty for the trivial action.
  std::vector<Eigen::MatrixXi> action;
  /// Permutation images of a_1, b_1, ...; empty for the index-two subgroup
  /// a_1 ↦ 1 ∈ Z/2 (all other generators ↦ 0).
  std::vector<std::vector<int>> subgroup;
  std::string cocycle = "section";  // section | zero
  bool inject_fault = false;
};

/// Random trivial word: a product of one to three conjugates
/// u r^±1 u^-1 with |u| <= 3, freely reduced and nonempty.
Word random_trivial_word(const SurfaceGroup& group, std::mt19937_64& rng);

/// Number of freely reduced words of length k that are a subword of a
/// cyclic conjugate of r^±1 of exactly half its length, halved: each such
/// element has two spellings.
std::size_t half_relator_identifications(const SurfaceGroup& group, int k);

struct LanguageTravellerReport {
  int radius = 0;
  int delta = 0;
  std::size_t pairs = 0;
  std::size_t skipped = 0;
};

/// Synchronous distances between x u y and w = canonical(x u y) for
/// canonical u with |u| <= radius - 2 and x, y ∈ X ∪ {1}.
LanguageTravellerReport language_fellow_traveller(const CayleyBall& ball, int radius);

class Verifier {
 public:
  /// Throws UsageError for inconsistent configurations.
  explicit Verifier(VerifyConfig config);

  static const std::vector<std::string>& suites();
  /// Runs the checks of a suite; a check that throws is reported failed,
  /// except for UsageError (radius too small for the automata) and
  /// ResourceError, which propagate.
  std::vector<CheckResult> run(const std::string& suite);

  CheckResult cocycle_identity();
  CheckResult closed_form();
  CheckResult loop_identity();
  CheckResult extension_arithmetic();
  CheckResult weak_boundedness();
  CheckResult geometry_oracle();
  CheckResult fellow_travellers();
  CheckResult automata();
  CheckResult transfer();
  CheckResult ball_counts();

  const VerifyConfig& config() const { return config_; }
  const CayleyBall& ball() const { return *ball_; }
  std::shared_ptr<const CayleyBall> ball_ptr() const { return ball_; }
  const Cocycle& cocycle() const { return *sigma_; }
  std::shared_ptr<const Cocycle> cocycle_ptr() const { return sigma_; }
  bool section_cocycle() const { return config_.cocycle == "section"; }

  /// Throws UsageError unless the acceptor built from radius-R data
  /// accepts exactly the canonical words of the ball of radius R + 1.
  const WordAcceptor& acceptor();
  const std::vector<LevelSetMachines>& level_set_machines();
  const Extension& extension();
  const YAlphabet& y_alphabet();
  const FiberLanguage& fiber_language();
  const fsa::Dfa& lifted();

 private:
  CheckResult guarded(const std::string& id, const std::string& title, CheckResult (Verifier::*check)());
  std::shared_ptr<const CosetStructure> subgroup_cosets() const;
  Json format_triple(const Triple& t) const;

  VerifyConfig config_;
  std::shared_ptr<const Surface> surface_;
  std::shared_ptr<const CayleyBall> ball_;
  Coefficients coeffs_;
  std::optional<FiniteAction> action_;
  std::shared_ptr<const Cocycle> sigma_;
  std::optional<WordAcceptor> acceptor_;
  std::optional<std::vector<LevelSetMachines>> machines_;
  std::unique_ptr<Extension> extension_;
  std::unique_ptr<YAlphabet> y_;
  std::unique_ptr<FiberLanguage> fiber_;
  std::optional<fsa::Dfa> lifted_;
};

Json report_json(const VerifyConfig& config, const std::vector<CheckResult>& checks);

}  // namespace regcocycle

#endif  // REGCOCYCLE_VERIFY_HPP
