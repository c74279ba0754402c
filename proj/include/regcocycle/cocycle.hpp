#ifndef REGCOCYCLE_COCYCLE_HPP
#define REGCOCYCLE_COCYCLE_HPP

// Two-cocycles on a surface group with values in a finitely generated
// abelian group A carrying a finite right action of G:
//   σ(g1,g2)^g3 + σ(g1g2,g3) = σ(g2,g3) + σ(g1,g2g3).
// Cocycles are evaluated on elements of a Cayley ball; a value is
// nullopt when some element it needs lies outside the ball.

#include <Eigen/Core>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "regcocycle/ball.hpp"
#include "regcocycle/word_difference.hpp"

namespace regcocycle {

using Coeff = std::vector<std::int64_t>;

class CocycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A = Z^rank ⊕ Z/m_1 ⊕ ... ; coordinate i has modulus moduli()[i] (0 = free).
class Coefficients {
 public:
  Coefficients() : Coefficients(1, {}) {}
  Coefficients(int rank, std::vector<std::int64_t> torsion);

  std::size_t dimension() const { return moduli_.size(); }
  int rank() const { return rank_; }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }

  Coeff zero() const { return Coeff(dimension(), 0); }
  Coeff unit(std::size_t i, std::int64_t sign = 1) const;
  /// Checks the dimension and reduces torsion coordinates into [0, m).
  Coeff normalize(Coeff a) const;
  Coeff add(const Coeff& a, const Coeff& b) const;
  Coeff sub(const Coeff& a, const Coeff& b) const;
  Coeff neg(const Coeff& a) const;
  bool is_zero(const Coeff& a) const;
  std::string format(const Coeff& a) const;

  bool operator==(const Coefficients& o) const { return moduli_ == o.moduli_; }

 private:
  int rank_ = 1;
  std::vector<std::int64_t> moduli_;
};

/// Right action a ↦ a^g through signed permutations of the coordinates:
/// a^x = a M_x for row vectors a. Such an action has finite image.
class FiniteAction {
 public:
  static FiniteAction trivial(const SurfaceGroup& group, const Coefficients& coeffs);
  /// `matrices[2(i-1)]` and `matrices[2(i-1)+1]` give a_i and b_i. Throws
  /// CocycleError unless every matrix is a signed permutation preserving
  /// the moduli and the relator acts trivially.
  static FiniteAction from_matrices(const SurfaceGroup& group, const Coefficients& coeffs,
                                    const std::vector<Eigen::MatrixXi>& matrices);

  bool is_trivial() const { return trivial_; }
  const Coefficients& coefficients() const { return coeffs_; }
  Coeff apply(const Coeff& a, Letter x) const;
  Coeff apply(const Coeff& a, const Word& w) const;
  /// Order of the image of G in Aut(A).
  std::size_t image_order() const;
  Eigen::MatrixXi matrix(Letter x) const;

 private:
  FiniteAction() = default;
  Coefficients coeffs_;
  // perm_[x][i] = j, sign_[x][i] = ±1: coordinate i of a lands in j.
  std::vector<std::vector<int>> perm_;
  std::vector<std::vector<int>> sign_;
  bool trivial_ = true;
};

// ---------------------------------------------------------------------

class Cocycle {
 public:
  Cocycle(std::shared_ptr<const CayleyBall> ball, Coefficients coeffs, FiniteAction action)
      : ball_(std::move(ball)), coeffs_(std::move(coeffs)), action_(std::move(action)) {}
  virtual ~Cocycle() = default;

  virtual std::optional<Coeff> value(ElementId g1, ElementId g2) const = 0;
  virtual std::string provenance() const = 0;
  /// σ(g1, g2) from the canonical words of g1, g2 and g1g2, which may lie
  /// beyond the ball; nullopt when the cocycle cannot be evaluated there.
  std::optional<Coeff> value_words(const Word& w1, const Word& w2, const Word& w3) const;

  const CayleyBall& ball() const { return *ball_; }
  std::shared_ptr<const CayleyBall> ball_ptr() const { return ball_; }
  const Coefficients& coefficients() const { return coeffs_; }
  const FiniteAction& action() const { return action_; }
  Coeff act(const Coeff& a, ElementId g) const { return action_.apply(a, ball_->word(g)); }

 protected:
  virtual std::optional<Coeff> value_beyond_ball(const Word&, const Word&, const Word&) const { return std::nullopt; }

 private:
  std::shared_ptr<const CayleyBall> ball_;
  Coefficients coeffs_;
  FiniteAction action_;
};

/// The cocycle of the section s(w̄) = W̄ Z^{-n(w)} into
/// E_k = <A_i, B_i, Z | ∏[A_i,B_i] = Z^k, Z central>, k = 8g(g-1):
/// σ = k N(w1 w2 w3^-1) + n(w3) - n(w1) - n(w2) with N from Dehn's algorithm.
class SectionCocycle : public Cocycle {
 public:
  explicit SectionCocycle(std::shared_ptr<const CayleyBall> ball);
  static std::int64_t k_of_genus(int genus) { return 8LL * genus * (genus - 1); }
  std::optional<Coeff> value(ElementId g1, ElementId g2) const override;
  std::string provenance() const override { return "extension-arithmetic"; }
  /// n of the canonical word of g.
  int n(ElementId g) const { return n_[static_cast<std::size_t>(g)]; }

 protected:
  std::optional<Coeff> value_beyond_ball(const Word& w1, const Word& w2, const Word& w3) const override;

 private:
  std::vector<int> n_;
};

class ZeroCocycle : public Cocycle {
 public:
  ZeroCocycle(std::shared_ptr<const CayleyBall> ball, Coefficients coeffs, FiniteAction action)
      : Cocycle(std::move(ball), std::move(coeffs), std::move(action)) {}
  std::optional<Coeff> value(ElementId, ElementId) const override { return coefficients().zero(); }
  std::string provenance() const override { return "zero"; }

 protected:
  std::optional<Coeff> value_beyond_ball(const Word&, const Word&, const Word&) const override {
    return coefficients().zero();
  }
};

/// Explicit values on a finite set of pairs.
class TableCocycle : public Cocycle {
 public:
  struct Entry {
    ElementId g1, g2;
    Coeff value;
    std::string provenance;
  };
  TableCocycle(std::shared_ptr<const CayleyBall> ball, Coefficients coeffs, FiniteAction action);
  void set(ElementId g1, ElementId g2, Coeff value, std::string provenance);
  std::optional<Coeff> value(ElementId g1, ElementId g2) const override;
  std::string provenance() const override { return "table"; }
  std::vector<Entry> entries() const;  // sorted by (g1, g2)
  std::size_t size() const { return values_.size(); }

 private:
  static std::uint64_t key(ElementId a, ElementId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }
  std::unordered_map<std::uint64_t, std::pair<Coeff, std::string>> values_;
};

TableCocycle tabulate(const Cocycle& sigma, const std::vector<std::pair<ElementId, ElementId>>& pairs);

/// σ'(g1,g2) = σ(g1,g2) + u(g1)^g2 + u(g2) - u(g1g2), u given on every ball element.
class CoboundaryAdjusted : public Cocycle {
 public:
  CoboundaryAdjusted(std::shared_ptr<const Cocycle> base, std::vector<Coeff> u);
  std::optional<Coeff> value(ElementId g1, ElementId g2) const override;
  std::string provenance() const override { return "coboundary-adjusted " + base_->provenance(); }

 private:
  std::shared_ptr<const Cocycle> base_;
  std::vector<Coeff> u_;
};

/// Random u with coordinates in [-bound, bound] and u(1) = 0.
std::vector<Coeff> random_function(const CayleyBall& ball, const Coefficients& coeffs, int bound, std::mt19937_64& rng);

/// A cocycle with one value altered, for exercising failure reports.
class FaultInjected : public Cocycle {
 public:
  FaultInjected(std::shared_ptr<const Cocycle> base, ElementId g1, ElementId g2, Coeff delta);
  std::optional<Coeff> value(ElementId g1, ElementId g2) const override;
  std::string provenance() const override { return "fault-injected " + base_->provenance(); }

 private:
  std::shared_ptr<const Cocycle> base_;
  ElementId g1_, g2_;
  Coeff delta_;
};

// ---------------------------------------------------------------------
// Closed form for the section cocycle.

struct ClosedForm {
  /// Turn integers at the junctions between consecutive nonempty pieces
  /// of w = w1 w2 w3^-1, cyclically: (w1→w2), (w2→w3^-1), (w3^-1→w1) when
  /// all three pieces are nonempty.
  std::vector<int> phi;
  int tau = 0;  // rounded numeric turning number of w
  long double tau_numeric = 0;
  std::int64_t sigma = 0;  // sum(phi) - 4g tau
  /// τ predicted from the signs of (φ1, φ2, φ3), when w1, w3 are nonempty
  /// and w2 is a single letter.
  std::optional<int> sign_rule_tau;
};

/// Throws CocycleError when g1 g2 is outside the ball.
ClosedForm sigma_closed_form(const CayleyBall& ball, ElementId g1, ElementId g2);
std::optional<int> sign_rule(int phi1, int phi2, int phi3);

// ---------------------------------------------------------------------
// Identity check.

struct Triple {
  ElementId g1, g2, g3;
};

struct IdentityWitness {
  Triple triple;
  Coeff lhs, rhs;
};

struct IdentityReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;  // some evaluation left the ball
  std::size_t violations = 0;
  std::vector<IdentityWitness> witnesses;
  bool passed() const { return violations == 0 && checked > 0; }
};

IdentityReport check_cocycle_identity(const Cocycle& sigma, const std::vector<Triple>& triples,
                                      std::size_t max_witnesses = 10);
/// All triples of elements of length <= max_length.
std::vector<Triple> exhaustive_triples(const CayleyBall& ball, int max_length);
/// `count` triples with operand lengths <= max_length whose products
/// g1g2, g2g3, g1g2g3 lie in the ball; lengths are drawn uniformly first.
std::vector<Triple> random_triples(const CayleyBall& ball, int max_length, std::size_t count, std::mt19937_64& rng);

// ---------------------------------------------------------------------
// Weak boundedness and level sets.

/// g in ball(radius) with g x̄ in ball(radius).
std::vector<ElementId> right_domain(const CayleyBall& ball, Letter x, int radius);
/// Sorted distinct values of σ(g, x̄) (right) or σ(x̄, g) (left) over ball(radius).
std::vector<Coeff> right_values(const Cocycle& sigma, Letter x, int radius);
std::vector<Coeff> left_values(const Cocycle& sigma, Letter x, int radius);

struct ValueSetEntry {
  Letter letter = 0;
  std::vector<Coeff> right_previous, right, left_previous, left;
};

struct WeakBoundednessReport {
  int radius = 0;
  std::vector<ValueSetEntry> entries;
  bool stabilized = false;
  /// Largest |coordinate| among free coordinates of all values.
  std::int64_t max_abs = 0;
};

/// Value sets at radius - 1 and radius for every letter.
WeakBoundednessReport weak_boundedness_report(const Cocycle& sigma, int radius);

/// Partition of right_domain(x, radius) by the value σ(g, x̄).
std::map<Coeff, std::vector<ElementId>> level_sets(const Cocycle& sigma, Letter x, int radius);

struct TupleConflict {
  EndTuple tuple;
  ElementId first, second;  // elements with this tuple and different values
};

struct TupleClassification {
  Letter letter = 0;
  std::map<EndTuple, Coeff> values;
  std::size_t classified = 0;
  std::vector<TupleConflict> conflicts;
  bool consistent() const { return conflicts.empty(); }
};

/// Tabulates σ(g, x̄) against the end tuple of (w_g, w_{g x̄}) over right_domain(x, radius).
TupleClassification classify_by_end_tuple(const Cocycle& sigma, Letter x, int radius);

struct LevelSetMachines {
  Letter letter = 0;
  int data_radius = 0;
  MultiplierClassifier classifier;
  TupleClassification tuples;
  /// One minimized DFA per value, in value order.
  std::vector<std::pair<Coeff, fsa::Dfa>> dfas;
  /// Tuples first met beyond the ball, evaluated on the shortest word
  /// reaching their classifier state.
  std::size_t extended_tuples = 0;
  /// Classifier states whose tuples are absent from the tuple table.
  std::size_t unclassified_states = 0;
  /// Classifier states whose tuples map to different values.
  std::size_t conflicting_states = 0;
};

/// Level-set automata from the right-multiplier classifier and the tuple
/// table learned on ball(data_radius).
LevelSetMachines build_level_set_machines(const Cocycle& sigma, const WordAcceptor& acceptor, Letter x,
                                          int data_radius);

/// The DFA's accepted words of length <= radius are exactly the canonical
/// words of `elements` of length <= radius.
bool dfa_matches_elements(const fsa::Dfa& dfa, const CayleyBall& ball, const std::vector<ElementId>& elements,
                          int radius);

/// Level sets of σ(·, h) over ball(radius - |h|), assembled from the
/// single-letter level sets by peeling the last letter y of h = h1 y:
/// {g : σ(g,h) = a} = ∪_{b^y + c - σ(h1,y) = a} {g : σ(g,h1) = b} ∩ {g : σ(g h1, y) = c}.
/// Throws CocycleError when radius < |h|.
std::map<Coeff, std::vector<ElementId>> level_sets_general(const Cocycle& sigma, ElementId h, int radius);
/// The same partition by direct evaluation of σ(g, h).
std::map<Coeff, std::vector<ElementId>> level_sets_direct(const Cocycle& sigma, ElementId h, int radius);

// ---------------------------------------------------------------------
// Transfer.

/// Finite-index subgroup H = stabilizer of point 0 under a transitive right
/// action of G on {0, ..., m-1} given by permutations of the generators
/// a_i, b_i. Right cosets Hg correspond to the points 0·g.
class CosetStructure {
 public:
  CosetStructure(std::shared_ptr<const CayleyBall> ball, std::vector<std::vector<int>> generator_images);
  static CosetStructure trivial(std::shared_ptr<const CayleyBall> ball);
  /// Kernel of the map to Z/2 sending the listed generators to 1.
  static CosetStructure index_two(std::shared_ptr<const CayleyBall> ball, const std::vector<Letter>& odd_generators);

  int index() const { return static_cast<int>(images_.empty() ? 1 : images_[0].size()); }
  int coset(const Word& w) const;
  int coset(ElementId g) const { return coset(ball_->word(g)); }
  bool in_subgroup(ElementId g) const { return coset(g) == 0; }
  /// Shortlex-first ball element of each coset.
  const std::vector<ElementId>& representatives() const { return reps_; }
  ElementId representative(int coset) const { return reps_[static_cast<std::size_t>(coset)]; }
  const std::vector<std::vector<int>>& images() const { return images_; }

 private:
  std::shared_ptr<const CayleyBall> ball_;
  std::vector<std::vector<int>> images_;  // per letter (inverses included)
  std::vector<ElementId> reps_;
};

/// Tσ(g1,g2) = Σ_{y∈S} σ(y g1 r(yg1)^-1, r(yg1) g2 r(yg1g2)^-1)^{r(yg1g2)},
/// where σ is only ever evaluated on elements of H. The twist by
/// r(y g1 g2) is what makes Tσ a cocycle for the right action; for a
/// trivial action it is the plain sum over the coset representatives.
class TransferCocycle : public Cocycle {
 public:
  TransferCocycle(std::shared_ptr<const Cocycle> base, std::shared_ptr<const CosetStructure> cosets);
  std::optional<Coeff> value(ElementId g1, ElementId g2) const override;
  std::string provenance() const override { return "transfer " + base_->provenance(); }

 private:
  std::shared_ptr<const Cocycle> base_;
  std::shared_ptr<const CosetStructure> cosets_;
};

}  // namespace regcocycle

#endif  // REGCOCYCLE_COCYCLE_HPP
