#ifndef REGCOCYCLE_BALL_HPP
#define REGCOCYCLE_BALL_HPP

// Balls in the Cayley graph of a surface group. Elements are identified
// by the positions of their vertices in the hyperbolic plane (vertices of
// the tessellation are far apart), and every identification is confirmed
// by Dehn's algorithm.

#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "regcocycle/geometry.hpp"
#include "regcocycle/group.hpp"

namespace regcocycle {

using ElementId = std::int32_t;
inline constexpr ElementId kNone = -1;

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfBall : public GroupError {
 public:
  using GroupError::GroupError;
};

struct SphereStats {
  int radius = 0;
  std::size_t size = 0;
  /// Freely reduced one-letter extensions of the previous sphere's words.
  std::size_t extensions = 0;
  /// Extensions landing on an element already found at this radius.
  std::size_t same_length_merges = 0;
  /// Extensions landing on an element of smaller length.
  std::size_t shorter_merges = 0;
};

/// Shared geometric context of a genus: presentation, link, turns, model.
struct Surface {
  explicit Surface(int genus) : group(genus), link(group), turns(link), model(group, link) {}
  SurfaceGroup group;
  VertexLink link;
  TurnTable turns;
  Model model;
};

class CayleyBall {
 public:
  static CayleyBall build(std::shared_ptr<const Surface> surface, int radius, std::size_t element_limit = 4'000'000);
  /// Rebuilds a ball from serialized words and adjacency; throws GroupError
  /// when the data is not a valid ball of the given radius.
  static CayleyBall restore(std::shared_ptr<const Surface> surface, int radius, const std::vector<Word>& words,
                            const std::vector<std::vector<ElementId>>& adjacency);

  const Surface& surface() const { return *surface_; }
  std::shared_ptr<const Surface> surface_ptr() const { return surface_; }
  const SurfaceGroup& group() const { return surface_->group; }
  int genus() const { return surface_->group.genus(); }
  int num_letters() const { return 4 * genus(); }
  int radius() const { return radius_; }
  std::size_t size() const { return words_.size(); }

  ElementId identity() const { return 0; }
  /// Canonical (shortlex-least geodesic) word.
  const Word& word(ElementId e) const { return words_[static_cast<std::size_t>(e)]; }
  int length(ElementId e) const { return static_cast<int>(words_[static_cast<std::size_t>(e)].size()); }
  /// e * x, or kNone when outside the ball.
  ElementId neighbor(ElementId e, Letter x) const {
    return adjacency_[static_cast<std::size_t>(e) * static_cast<std::size_t>(num_letters()) + static_cast<std::size_t>(x)];
  }
  /// Elements of length k occupy [sphere_begin(k), sphere_begin(k+1)).
  std::size_t sphere_begin(int k) const { return sphere_offsets_.at(static_cast<std::size_t>(k)); }
  std::size_t sphere_end(int k) const { return sphere_offsets_.at(static_cast<std::size_t>(k) + 1); }
  std::size_t sphere_size(int k) const { return sphere_end(k) - sphere_begin(k); }
  std::vector<ElementId> elements_up_to(int k) const;
  const std::vector<SphereStats>& stats() const { return stats_; }

  /// Element of `from` times w, when both the walk and the element stay
  /// inside the ball (no position lookup).
  ElementId walk(ElementId from, const Word& w) const;
  std::optional<ElementId> find(const Word& w) const;
  ElementId element(const Word& w) const;
  Word canonical(const Word& w) const { return word(element(w)); }
  std::optional<ElementId> multiply(ElementId g, ElementId h) const;
  std::optional<ElementId> inverse(ElementId g) const;
  /// Word-metric distance d(g, h) = |g^-1 h| when g^-1 h is in the ball.
  std::optional<int> distance(ElementId g, ElementId h) const;
  /// All geodesic words for e, in shortlex order.
  std::vector<Word> geodesic_words(ElementId e) const;

  const Model::Matrix& position(ElementId e) const { return positions_[static_cast<std::size_t>(e)]; }

 private:
  CayleyBall() = default;
  ElementId lookup(const Model::Matrix& m) const;
  void index_position(ElementId e);

  std::shared_ptr<const Surface> surface_;
  int radius_ = 0;
  std::vector<Word> words_;
  std::vector<ElementId> adjacency_;
  std::vector<std::size_t> sphere_offsets_;
  std::vector<SphereStats> stats_;
  std::vector<Model::Matrix, Eigen::aligned_allocator<Model::Matrix>> positions_;
  std::unordered_map<std::uint64_t, std::vector<ElementId>> grid_;
};

}  // namespace regcocycle

#endif  // REGCOCYCLE_BALL_HPP
