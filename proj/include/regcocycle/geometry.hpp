#ifndef REGCOCYCLE_GEOMETRY_HPP
#define REGCOCYCLE_GEOMETRY_HPP

// Angles in the tessellation of the hyperbolic plane by regular 4g-gons
// with vertex angle pi/2g.
//
// Orientation: the polygon boundary read along the relator turns left
// (counterclockwise), so it has turning number +1 and positive area.
// Turn integers m mean an angle of m * pi/2g, with -2g < m <= 2g; a
// backtrack x x^-1 is the turn +pi (m = 2g).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "regcocycle/group.hpp"

namespace regcocycle {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counterclockwise cyclic order of the 4g edge germs at a vertex,
/// labelled by the letter read when leaving along the edge.
class VertexLink {
 public:
  explicit VertexLink(const SurfaceGroup& group);

  int genus() const { return genus_; }
  const std::vector<Letter>& cycle() const { return cycle_; }
  int position(Letter x) const { return position_.at(static_cast<std::size_t>(x)); }
  int wedges() const { return static_cast<int>(cycle_.size()); }

 private:
  int genus_;
  std::vector<Letter> cycle_;
  std::vector<int> position_;
};

class TurnTable {
 public:
  explicit TurnTable(const VertexLink& link);

  int genus() const { return genus_; }
  /// Turn integer when arriving along `in` and leaving along `out`.
  int operator()(Letter in, Letter out) const {
    return table_[static_cast<std::size_t>(in) * static_cast<std::size_t>(4 * genus_) + static_cast<std::size_t>(out)];
  }

 private:
  int genus_;
  std::vector<int> table_;
};

/// Sum of the turn integers at the interior vertices of the path.
int n_of_word(const Word& w, const TurnTable& turns);
/// Turn from the last letter back to the first (for closed paths).
int closing_turn(const Word& w, const TurnTable& turns);

// ---------------------------------------------------------------------
// Upper half-plane model. Generators act by SL(2,R) matrices; the base
// vertex is i and the edge germ at position p of the link leaves i in
// direction p * pi/2g.

template <typename Scalar>
class IsometryModel {
 public:
  using Matrix = Eigen::Matrix<Scalar, 2, 2>;

  IsometryModel(const SurfaceGroup& group, const VertexLink& link) : genus_(group.genus()) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar half_angle = pi / static_cast<Scalar>(4 * genus_);
    // Regular 4g-gon with vertex angle pi/2g: cosh(side/2) = cot(pi/4g).
    side_ = 2 * std::acosh(1 / std::tan(half_angle));
    const Scalar cot = 1 / std::tan(half_angle);
    circumradius_ = std::acosh(cot * cot);
    const Scalar wedge = pi / static_cast<Scalar>(2 * genus_);
    generators_.resize(static_cast<std::size_t>(4 * genus_));
    for (Letter x = 0; x < 4 * genus_; ++x) {
      const Scalar out = wedge * static_cast<Scalar>(link.position(x));
      const Scalar back = wedge * static_cast<Scalar>(link.position(inverse_letter(x)));
      generators_[static_cast<std::size_t>(x)] = rotation(out) * translation(side_) * rotation(pi - back);
    }
  }

  int genus() const { return genus_; }
  Scalar side_length() const { return side_; }
  Scalar circumradius() const { return circumradius_; }
  const Matrix& generator(Letter x) const { return generators_.at(static_cast<std::size_t>(x)); }

  Matrix evaluate(const Word& w) const {
    Matrix m = Matrix::Identity();
    for (Letter x : w) m = m * generator(x);
    return m;
  }

  /// Rotation about i turning tangent vectors by +angle.
  static Matrix rotation(Scalar angle) {
    Matrix m;
    const Scalar c = std::cos(angle / 2), s = std::sin(angle / 2);
    m << c, s, -s, c;
    return m;
  }

  /// Hyperbolic translation moving i a distance d in direction 0.
  static Matrix translation(Scalar d) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    Matrix dil;
    dil << std::exp(d / 2), 0, 0, std::exp(-d / 2);
    return rotation(-pi / 2) * dil * rotation(pi / 2);
  }

  static Matrix inverse(const Matrix& m) {
    Matrix a;
    a << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return a;
  }

  /// cosh of the distance from i to m(i).
  static Scalar cosh_distance(const Matrix& m) { return m.squaredNorm() / 2; }

  /// Uses sinh(d/2) = |(a - d, b + c)| / 2, accurate for small d.
  static Scalar distance(const Matrix& m) {
    const Scalar u = m(0, 0) - m(1, 1), v = m(0, 1) + m(1, 0);
    return 2 * std::asinh(std::sqrt(u * u + v * v) / 2);
  }

  /// Direction at i of the geodesic towards m(i); nullopt when m(i) = i.
  static std::optional<Scalar> direction(const Matrix& m) {
    if (distance(m) < Scalar(1e-12)) return std::nullopt;
    const std::complex<Scalar> I(0, 1);
    const std::complex<Scalar> z = (m(0, 0) * I + m(0, 1)) / (m(1, 0) * I + m(1, 1));
    // Cayley transform to the disk turns tangents at i by -pi/2.
    const std::complex<Scalar> w = (z - I) / (z + I);
    return std::arg(w) + std::numbers::pi_v<Scalar> / 2;
  }

  /// Hyperboloid coordinates (X0, X1, X2) of m(i).
  static Eigen::Matrix<Scalar, 3, 1> hyperboloid(const Matrix& m) {
    const Scalar a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    Eigen::Matrix<Scalar, 3, 1> v;
    v << (a * a + b * b + c * c + d * d) / 2, (a * a + b * b - c * c - d * d) / 2, a * c + b * d;
    return v;
  }

  /// Largest deviation from +-I over the products of all cyclic conjugates of the relator.
  Scalar relator_residual(const SurfaceGroup& group) const {
    const Word& r = group.relator();
    Scalar worst = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      Word c(r.begin() + static_cast<std::ptrdiff_t>(j), r.end());
      c.insert(c.end(), r.begin(), r.begin() + static_cast<std::ptrdiff_t>(j));
      const Matrix p = evaluate(c);
      const Scalar e = std::min((p - Matrix::Identity()).norm(), (p + Matrix::Identity()).norm());
      worst = std::max(worst, e);
    }
    return worst;
  }

  /// Boundary of the polygon traced by the relator: sides, angles, closure
  /// and side pairings, as the largest deviation from the exact values.
  Scalar polygon_residual(const SurfaceGroup& group) const {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Word& r = group.relator();
    const std::size_t n = r.size();
    std::vector<Matrix> prefix{Matrix::Identity()};
    for (Letter x : r) prefix.push_back(prefix.back() * generator(x));
    Scalar worst = distance(prefix.back());
    for (std::size_t k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(distance(inverse(prefix[k]) * prefix[k + 1]) - side_));
      // Interior angle pi/2g between the sides at vertex k + 1.
      const Matrix frame = inverse(prefix[k + 1]);
      const auto back = direction(frame * prefix[k]);
      const auto out = direction(frame * prefix[k + 2 <= n ? k + 2 : 1]);
      if (!back || !out) return std::numeric_limits<Scalar>::infinity();
      Scalar interior = std::remainder(*back - *out, 2 * pi);
      worst = std::max(worst, std::abs(std::abs(interior) - pi / static_cast<Scalar>(2 * genus_)));
    }
    // Side pairing: the side read as x at position k and as x^-1 at
    // position k' are matched by prefix[k'+1] * prefix[k]^-1.
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t kk = 0; kk < n; ++kk) {
        if (r[kk] != inverse_letter(r[k])) continue;
        const Matrix h = prefix[kk + 1] * inverse(prefix[k]);
        worst = std::max(worst, distance(inverse(prefix[kk + 1]) * h * prefix[k]));
        worst = std::max(worst, distance(inverse(prefix[kk]) * h * prefix[k + 1]));
      }
    return worst;
  }

 private:
  int genus_;
  Scalar side_;
  Scalar circumradius_;
  std::vector<Matrix> generators_;
};

using Model = IsometryModel<long double>;

// ---------------------------------------------------------------------
// Floating-point measurements along a path.

struct NumericPath {
  bool closed = false;
  /// Turning angles (radians, in (-pi, pi]) at vertices 1..n-1, then the
  /// closing turn when the path is closed.
  std::vector<long double> turns;
  /// Largest |m - round(m)| over the turns in units of pi/2g.
  long double max_snap_residual = 0;
  std::size_t worst_vertex = 0;
  long double area = 0;            // signed, closed paths only
  long double turning_number = 0;  // (sum of turns - area) / 2pi, closed paths only
};

/// Measures turns and (for closed paths) signed area by a fan of geodesic
/// triangles from the base vertex. Throws GeometryError for words longer
/// than 64 letters or when a vertex direction is numerically undefined.
NumericPath numeric_oracle(const Word& w, const Model& model);

/// Turn angle snapped to an integer multiple of pi/2g.
int snap_turn(long double angle, int genus);

struct LoopAnalysis {
  Word word;
  int n = 0;        // interior turn sum
  int theta_n = 0;  // closing turn
  int N = 0;        // signed relator count from Dehn's algorithm
  std::optional<int> tau;    // solved from n + theta_n = 8g(g-1)N + 4g tau
  long double area = 0;
  long double tau_numeric = 0;
  long double N_numeric = 0;  // area / (4(g-1)pi)
  /// tau solvable and equal to the rounded numeric turning number.
  bool consistent = false;
};

/// Throws GeometryError when w is not a closed path.
LoopAnalysis analyze_loop(const Word& w, const SurfaceGroup& group, const TurnTable& turns, const Model& model);

}  // namespace regcocycle

#endif  // REGCOCYCLE_GEOMETRY_HPP
