#include "regcocycle/ball.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace regcocycle {

namespace {

// Distinct vertices are at least one side length (> 3) apart, and the
// projection of the hyperboloid to its (X1, X2) coordinates does not
// shrink distances, so a grid of cell size 2 and a match radius of 1
// separate them safely.
constexpr long double kCell = 2.0L;
constexpr long double kMatch = 1.0L;

std::int64_t cell_of(long double v) { return static_cast<std::int64_t>(std::floor(v / kCell)); }

std::uint64_t cell_key(std::int64_t ix, std::int64_t iy) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) | static_cast<std::uint32_t>(iy);
}

}  // namespace

void CayleyBall::index_position(ElementId e) {
  const auto h = Model::hyperboloid(positions_[static_cast<std::size_t>(e)]);
  grid_[cell_key(cell_of(h(1)), cell_of(h(2)))].push_back(e);
}

ElementId CayleyBall::lookup(const Model::Matrix& m) const {
  const auto h = Model::hyperboloid(m);
  if (!h.allFinite()) return kNone;
  const auto ix = cell_of(h(1)), iy = cell_of(h(2));
  for (std::int64_t dx = -1; dx <= 1; ++dx)
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
      auto it = grid_.find(cell_key(ix + dx, iy + dy));
      if (it == grid_.end()) continue;
      for (ElementId e : it->second) {
        const auto p = Model::hyperboloid(positions_[static_cast<std::size_t>(e)]);
        if (std::hypot(p(1) - h(1), p(2) - h(2)) < kMatch) return e;
      }
    }
  return kNone;
}

CayleyBall CayleyBall::build(std::shared_ptr<const Surface> surface, int radius, std::size_t element_limit) {
  if (radius < 0) throw GroupError("radius must be non-negative");
  CayleyBall ball;
  ball.surface_ = std::move(surface);
  ball.radius_ = radius;
  const auto& group = ball.group();
  const auto& model = ball.surface_->model;
  const int k = ball.num_letters();

  auto add = [&](Word w, const Model::Matrix& m) {
    if (ball.words_.size() >= element_limit)
      throw ResourceError("ball of radius " + std::to_string(radius) + " exceeds the element limit of " +
                          std::to_string(element_limit));
    ball.words_.push_back(std::move(w));
    ball.positions_.push_back(m);
    ball.adjacency_.insert(ball.adjacency_.end(), static_cast<std::size_t>(k), kNone);
    const auto id = static_cast<ElementId>(ball.words_.size() - 1);
    ball.index_position(id);
    return id;
  };

  add({}, Model::Matrix::Identity());
  ball.sphere_offsets_ = {0, 1};
  ball.stats_.push_back({0, 1, 0, 0, 0});

  for (int len = 0; len <= radius; ++len) {
    const std::size_t begin = ball.sphere_offsets_[static_cast<std::size_t>(len)];
    const std::size_t end = ball.sphere_offsets_[static_cast<std::size_t>(len) + 1];
    SphereStats next{len + 1, 0, 0, 0, 0};
    for (std::size_t i = begin; i < end; ++i) {
      const auto e = static_cast<ElementId>(i);
      for (Letter x = 0; x < k; ++x) {
        const std::size_t slot = i * static_cast<std::size_t>(k) + static_cast<std::size_t>(x);
        const Word& w = ball.words_[i];
        const bool extension = w.empty() || x != inverse_letter(w.back());
        if (extension) ++next.extensions;
        if (ball.adjacency_[slot] != kNone) {
          if (extension) ++next.shorter_merges;
          continue;
        }
        const Model::Matrix m = ball.positions_[i] * model.generator(x);
        ElementId target = ball.lookup(m);
        if (target != kNone) {
          if (!group.equal(concat(w, Word{x}), ball.words_[static_cast<std::size_t>(target)]))
            throw GroupError("position match not confirmed by Dehn's algorithm: " + group.format(concat(w, Word{x})));
          if (ball.length(target) == len + 1) {
            if (extension) ++next.same_length_merges;
          } else if (extension) {
            ++next.shorter_merges;
          }
        } else if (len < radius) {
          target = add(concat(w, Word{x}), m);
        } else {
          continue;
        }
        ball.adjacency_[slot] = target;
        ball.adjacency_[static_cast<std::size_t>(target) * static_cast<std::size_t>(k) +
                        static_cast<std::size_t>(inverse_letter(x))] = e;
      }
    }
    if (len < radius) {
      ball.sphere_offsets_.push_back(ball.words_.size());
      next.size = ball.words_.size() - end;
      ball.stats_.push_back(next);
    }
  }
  return ball;
}

CayleyBall CayleyBall::restore(std::shared_ptr<const Surface> surface, int radius, const std::vector<Word>& words,
                               const std::vector<std::vector<ElementId>>& adjacency) {
  CayleyBall ball;
  ball.surface_ = std::move(surface);
  ball.radius_ = radius;
  const auto& group = ball.group();
  const int k = ball.num_letters();
  if (words.empty() || !words[0].empty()) throw GroupError("ball data must start with the identity");
  if (adjacency.size() != words.size()) throw GroupError("ball adjacency does not match the element list");
  ball.sphere_offsets_ = {0};
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Word& w = words[i];
    group.check_word(w);
    if (static_cast<int>(w.size()) > radius) throw GroupError("ball element longer than the radius");
    if (i > 0 && !shortlex_less(words[i - 1], w)) throw GroupError("ball elements not in shortlex order");
    while (ball.sphere_offsets_.size() <= w.size()) ball.sphere_offsets_.push_back(i);
    ball.words_.push_back(w);
    ball.positions_.push_back(ball.surface_->model.evaluate(w));
    if (ball.lookup(ball.positions_.back()) != kNone) throw GroupError("ball data lists an element twice");
    ball.index_position(static_cast<ElementId>(i));
    if (adjacency[i].size() != static_cast<std::size_t>(k)) throw GroupError("ball adjacency row has wrong width");
    ball.adjacency_.insert(ball.adjacency_.end(), adjacency[i].begin(), adjacency[i].end());
  }
  while (ball.sphere_offsets_.size() <= static_cast<std::size_t>(radius) + 1)
    ball.sphere_offsets_.push_back(words.size());
  for (int len = 0; len <= radius; ++len) ball.stats_.push_back({len, ball.sphere_size(len), 0, 0, 0});
  // Adjacency must agree with the geometry in both directions.
  for (std::size_t i = 0; i < words.size(); ++i)
    for (Letter x = 0; x < k; ++x) {
      const ElementId t = ball.lookup(ball.positions_[i] * ball.surface_->model.generator(x));
      if (t != ball.neighbor(static_cast<ElementId>(i), x)) throw GroupError("ball adjacency is inconsistent");
    }
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto e = static_cast<ElementId>(i);
    if (ball.walk(0, words[i]) != e) throw GroupError("ball word does not reach its element");
    // Shortlex-least geodesic: every geodesic predecessor p with e = p x
    // gives a word p x that is not smaller.
    for (Letter x = 0; x < k; ++x) {
      const ElementId p = ball.neighbor(e, inverse_letter(x));
      if (p == kNone || ball.length(p) + 1 != ball.length(e)) continue;
      if (shortlex_less(concat(ball.word(p), Word{x}), words[i])) throw GroupError("ball word is not shortlex-least");
    }
  }
  return ball;
}

std::vector<ElementId> CayleyBall::elements_up_to(int k) const {
  const std::size_t end = sphere_end(std::min(k, radius_));
  std::vector<ElementId> out(end);
  for (std::size_t i = 0; i < end; ++i) out[i] = static_cast<ElementId>(i);
  return out;
}

ElementId CayleyBall::walk(ElementId from, const Word& w) const {
  ElementId cur = from;
  for (Letter x : w) {
    if (x < 0 || x >= num_letters()) throw GroupError("letter out of range");
    cur = neighbor(cur, x);
    if (cur == kNone) return kNone;
  }
  return cur;
}

std::optional<ElementId> CayleyBall::find(const Word& w) const {
  const ElementId e = walk(0, w);
  if (e != kNone) return e;
  if (w.size() > 64) {
    const Word reduced = group().dehn_word(w);
    if (reduced.size() > 64) return std::nullopt;
    return find(reduced);
  }
  const ElementId c = lookup(surface_->model.evaluate(w));
  if (c == kNone || !group().equal(w, word(c))) return std::nullopt;
  return c;
}

ElementId CayleyBall::element(const Word& w) const {
  auto e = find(w);
  if (!e) throw OutOfBall("element outside the radius-" + std::to_string(radius_) + " ball: " + group().format(w));
  return *e;
}

std::optional<ElementId> CayleyBall::multiply(ElementId g, ElementId h) const {
  const ElementId e = walk(g, word(h));
  if (e != kNone) return e;
  const Model::Matrix m = position(g) * position(h);
  const ElementId c = lookup(m);
  if (c == kNone) return std::nullopt;
  if (!group().equal(concat(word(g), word(h)), word(c))) return std::nullopt;
  return c;
}

std::optional<ElementId> CayleyBall::inverse(ElementId g) const {
  const ElementId e = walk(0, regcocycle::inverse(word(g)));
  if (e == kNone) return std::nullopt;
  return e;
}

std::optional<int> CayleyBall::distance(ElementId g, ElementId h) const {
  if (g == h) return 0;
  const ElementId gi = walk(0, regcocycle::inverse(word(g)));
  if (gi == kNone) return std::nullopt;
  auto d = multiply(gi, h);
  if (!d) return std::nullopt;
  return length(*d);
}

std::vector<Word> CayleyBall::geodesic_words(ElementId e) const {
  std::vector<Word> out;
  Word suffix;
  std::function<void(ElementId)> rec = [&](ElementId cur) {
    if (cur == 0) {
      out.emplace_back(suffix.rbegin(), suffix.rend());
      return;
    }
    for (Letter x = 0; x < num_letters(); ++x) {
      const ElementId p = neighbor(cur, inverse_letter(x));
      if (p == kNone || length(p) != length(cur) - 1) continue;
      suffix.push_back(x);
      rec(p);
      suffix.pop_back();
    }
  };
  rec(e);
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

}  // namespace regcocycle
