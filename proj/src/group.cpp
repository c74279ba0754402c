#include "regcocycle/group.hpp"

#include <algorithm>
#include <cctype>

namespace regcocycle {

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& x : out) x = inverse_letter(x);
  return out;
}

Word concat(const Word& u, const Word& v) {
  Word out;
  out.reserve(u.size() + v.size());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter x : w) {
    if (!out.empty() && out.back() == inverse_letter(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == inverse_letter(w[i - 1])) return false;
  return true;
}

bool shortlex_less(const Word& u, const Word& v) {
  if (u.size() != v.size()) return u.size() < v.size();
  return u < v;
}

int DehnResult::relator_count() const {
  int n = 0;
  for (const auto& s : trace) n += s.sign;
  return n;
}

SurfaceGroup::SurfaceGroup(int genus) : genus_(genus) {
  if (genus < 2) throw GroupError("genus must be at least 2");
  for (int i = 1; i <= genus; ++i) {
    relator_.push_back(letter(i, false));
    relator_.push_back(letter(i, true));
    relator_.push_back(letter(i, false, true));
    relator_.push_back(letter(i, true, true));
  }
  rel_[0] = relator_;
  rel_[1] = inverse(relator_);
  for (int e = 0; e < 2; ++e) {
    pos_[e].assign(static_cast<std::size_t>(num_letters()), -1);
    for (std::size_t j = 0; j < rel_[e].size(); ++j) pos_[e][static_cast<std::size_t>(rel_[e][j])] = static_cast<int>(j);
  }
}

Letter SurfaceGroup::letter(int i, bool is_b, bool inverted) const {
  if (i < 1 || i > genus_) throw GroupError("generator index out of range");
  return 4 * (i - 1) + (is_b ? 2 : 0) + (inverted ? 1 : 0);
}

std::string SurfaceGroup::letter_name(Letter x) const {
  if (x < 0 || x >= num_letters()) throw GroupError("letter out of range");
  const bool is_b = (x & 2) != 0;
  const bool inv = (x & 1) != 0;
  std::string name(1, is_b ? (inv ? 'B' : 'b') : (inv ? 'A' : 'a'));
  return name + std::to_string(x / 4 + 1);
}

fsa::Alphabet SurfaceGroup::alphabet() const {
  std::vector<std::string> names;
  for (Letter x = 0; x < num_letters(); ++x) names.push_back(letter_name(x));
  return fsa::Alphabet(std::move(names));
}

std::string SurfaceGroup::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += letter_name(w[i]);
  }
  return out;
}

Word SurfaceGroup::parse(const std::string& text) const {
  Word out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c != 'a' && c != 'A' && c != 'b' && c != 'B') throw GroupError("bad letter in word '" + text + "'");
    std::size_t j = i + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j == i + 1) throw GroupError("letter without index in word '" + text + "'");
    const int index = std::stoi(text.substr(i + 1, j - i - 1));
    if (index < 1 || index > genus_) throw GroupError("generator index out of range in word '" + text + "'");
    out.push_back(letter(index, c == 'b' || c == 'B', c == 'A' || c == 'B'));
    i = j;
  }
  return out;
}

void SurfaceGroup::check_word(const Word& w) const {
  for (Letter x : w)
    if (x < 0 || x >= num_letters()) throw GroupError("letter out of range");
}

namespace {

// Shared Dehn loop; `trace` may be null.
Word dehn_core(const Word& w, int genus, const Word (&rel)[2], const std::vector<int> (&pos)[2],
               std::vector<DehnStep>* trace) {
  const int len = 4 * genus;
  const int threshold = 2 * genus + 1;
  Word cur = free_reduce(w);
  for (;;) {
    int best_len = 0, best_i = -1, best_e = 0, best_j = 0;
    const int n = static_cast<int>(cur.size());
    for (int i = 0; i < n && best_len < len; ++i) {
      for (int e = 0; e < 2; ++e) {
        const int j = pos[e][static_cast<std::size_t>(cur[static_cast<std::size_t>(i)])];
        int l = 0;
        while (l < len && i + l < n &&
               cur[static_cast<std::size_t>(i + l)] == rel[e][static_cast<std::size_t>((j + l) % len)])
          ++l;
        if (l >= threshold && l > best_len) {
          best_len = l;
          best_i = i;
          best_e = e;
          best_j = j;
        }
      }
      if (best_len >= threshold) break;
    }
    if (best_i < 0) return cur;

    // c = R[j..] R[..j) = s t with |s| = best_len; replace s by t^-1.
    const Word& R = rel[best_e];
    Word t_inv;
    for (int l = len - 1; l >= best_len; --l)
      t_inv.push_back(inverse_letter(R[static_cast<std::size_t>((best_j + l) % len)]));
    if (trace) {
      // c = v^-1 R v with v = R[0..j), so p c p^-1 = (p v^-1) R (p v^-1)^-1.
      Word conj(cur.begin(), cur.begin() + best_i);
      for (int l = best_j - 1; l >= 0; --l) conj.push_back(inverse_letter(R[static_cast<std::size_t>(l)]));
      trace->push_back({free_reduce(conj), best_e == 0 ? 1 : -1});
    }
    Word next(cur.begin(), cur.begin() + best_i);
    next.insert(next.end(), t_inv.begin(), t_inv.end());
    next.insert(next.end(), cur.begin() + best_i + best_len, cur.end());
    cur = free_reduce(next);
  }
}

}  // namespace

DehnResult SurfaceGroup::dehn_reduce(const Word& w) const {
  check_word(w);
  DehnResult result;
  result.reduced = dehn_core(w, genus_, rel_, pos_, &result.trace);
  return result;
}

Word SurfaceGroup::dehn_word(const Word& w) const {
  check_word(w);
  return dehn_core(w, genus_, rel_, pos_, nullptr);
}

bool SurfaceGroup::is_trivial(const Word& w) const { return dehn_word(w).empty(); }

bool SurfaceGroup::equal(const Word& u, const Word& v) const { return is_trivial(concat(u, inverse(v))); }

}  // namespace regcocycle
