#pragma once

// Reduced words in the free group F_n, automorphisms acting on them, and the
// fixed shortlex enumerations that index every norm vector.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "auter/error.hpp"

namespace auter {

/// A letter is a signed generator index: +i is x_i, -i is x_i^-1 (i >= 1).
using Letter = int;

/// Position of a letter in the alphabet order x1 < x1^-1 < x2 < x2^-1 < ...
inline int letter_key(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

/// Freely reduced word. Construct through reduce() or Word::from_reduced().
class Word {
 public:
  Word() = default;

  static Word from_reduced(std::vector<Letter> letters) {
    Word w;
    w.letters_ = std::move(letters);
    return w;
  }

  static Word generator(int i) { return from_reduced({i}); }

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const {
    std::vector<Letter> out(letters_.rbegin(), letters_.rend());
    for (auto& l : out) l = -l;
    return from_reduced(std::move(out));
  }

  /// Largest generator index used (0 for the empty word).
  int max_generator() const {
    int m = 0;
    for (auto l : letters_) m = std::max(m, std::abs(l));
    return m;
  }

  friend bool operator==(const Word&, const Word&) = default;

  /// Shortlex: shorter first, then lexicographic under letter_key.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return letter_key(a[i]) < letter_key(b[i]);
    }
    return false;
  }

  std::string to_string() const {
    if (letters_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i) s += ' ';
      if (letters_[i] < 0) s += '~';
      s += 'x' + std::to_string(std::abs(letters_[i]));
    }
    return s;
  }

 private:
  std::vector<Letter> letters_;
};

/// Free reduction by a single left-to-right stack scan. Validates that every
/// letter names a generator in 1..rank.
inline Word reduce(const std::vector<Letter>& raw, int rank) {
  std::vector<Letter> out;
  out.reserve(raw.size());
  for (auto l : raw) {
    if (l == 0 || std::abs(l) > rank) {
      throw ValidationError("invalid generator index " + std::to_string(l) +
                            " for rank " + std::to_string(rank));
    }
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word::from_reduced(std::move(out));
}

/// Reduction without a rank bound (letters only need to be nonzero).
inline Word reduce(const std::vector<Letter>& raw) {
  int rank = 0;
  for (auto l : raw) rank = std::max(rank, std::abs(l));
  return reduce(raw, std::max(rank, 1));
}

inline Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> out = a.letters();
  for (auto l : b.letters()) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return Word::from_reduced(std::move(out));
}

/// Parses whitespace-separated tokens `x1 ~x2 ...`; "1" or "" is the empty
/// word.
inline Word parse_word(std::string_view text, int rank) {
  std::istringstream in{std::string(text)};
  std::vector<Letter> raw;
  std::string tok;
  while (in >> tok) {
    if (tok == "1") continue;
    bool inv = false;
    std::size_t pos = 0;
    if (tok[0] == '~') {
      inv = true;
      pos = 1;
    }
    if (pos >= tok.size() || tok[pos] != 'x') {
      throw ValidationError("bad word token '" + tok + "'");
    }
    int idx = 0;
    try {
      idx = std::stoi(tok.substr(pos + 1));
    } catch (const std::exception&) {
      throw ValidationError("bad word token '" + tok + "'");
    }
    raw.push_back(inv ? -idx : idx);
  }
  return reduce(raw, rank);
}

// --- conjugacy --------------------------------------------------------------

struct CyclicReduction {
  Word core;
  Word conjugator;
};

/// w = conjugator * core * conjugator^-1 with core cyclically reduced.
inline CyclicReduction cyclic_reduce(const Word& w) {
  const auto& l = w.letters();
  std::size_t i = 0;
  std::size_t j = l.size();
  while (j - i >= 2 && l[i] == -l[j - 1]) {
    ++i;
    --j;
  }
  return {Word::from_reduced(std::vector<Letter>(l.begin() + i, l.begin() + j)),
          Word::from_reduced(std::vector<Letter>(l.begin(), l.begin() + i))};
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w.front() != -w.back();
}

/// Shortlex-least rotation of a cyclically reduced word.
inline Word least_rotation(const Word& w) {
  Word best = w;
  std::vector<Letter> cur = w.letters();
  for (std::size_t r = 1; r < cur.size(); ++r) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    Word cand = Word::from_reduced(cur);
    if (cand < best) best = cand;
  }
  return best;
}

/// A conjugacy class of F_n, stored by its canonical representative: the
/// least rotation of the cyclically reduced core. w and w^-1 are different
/// classes unless conjugate.
class ConjClass {
 public:
  explicit ConjClass(const Word& w) : rep_(least_rotation(cyclic_reduce(w).core)) {}

  const Word& rep() const noexcept { return rep_; }
  friend bool operator==(const ConjClass&, const ConjClass&) = default;
  friend bool operator<(const ConjClass& a, const ConjClass& b) { return a.rep_ < b.rep_; }
  std::string to_string() const { return "[" + rep_.to_string() + "]"; }

 private:
  Word rep_;
};

// --- automorphisms ------------------------------------------------------------

/// Endomorphism of F_n given by the images of x_1..x_n. Invertibility is a
/// checked property (see invert()), not a construction invariant, so that
/// claimed automorphisms can be validated.
class FreeAutomorphism {
 public:
  FreeAutomorphism() = default;
  explicit FreeAutomorphism(std::vector<Word> images) : images_(std::move(images)) {}

  static FreeAutomorphism identity(int rank) {
    std::vector<Word> im;
    for (int i = 1; i <= rank; ++i) im.push_back(Word::generator(i));
    return FreeAutomorphism(std::move(im));
  }

  int rank() const noexcept { return static_cast<int>(images_.size()); }
  const std::vector<Word>& images() const noexcept { return images_; }
  const Word& image(int generator) const { return images_.at(generator - 1); }

  Word apply(const Word& w) const {
    std::vector<Letter> raw;
    for (auto l : w.letters()) {
      const auto& im = images_.at(std::abs(l) - 1);
      if (l > 0) {
        raw.insert(raw.end(), im.letters().begin(), im.letters().end());
      } else {
        for (auto it = im.letters().rbegin(); it != im.letters().rend(); ++it) raw.push_back(-*it);
      }
    }
    return reduce(raw);
  }

  friend bool operator==(const FreeAutomorphism&, const FreeAutomorphism&) = default;

  std::string to_string() const {
    std::string s;
    for (int i = 0; i < rank(); ++i) {
      if (i) s += ", ";
      s += "x" + std::to_string(i + 1) + " -> " + images_[i].to_string();
    }
    return s;
  }

 private:
  std::vector<Word> images_;
};

inline Word apply_aut(const FreeAutomorphism& phi, const Word& w) { return phi.apply(w); }

/// (phi o psi)(w) = phi(psi(w)).
inline FreeAutomorphism compose(const FreeAutomorphism& phi, const FreeAutomorphism& psi) {
  std::vector<Word> im;
  for (const auto& w : psi.images()) im.push_back(phi.apply(w));
  return FreeAutomorphism(std::move(im));
}

namespace detail {

// Stallings folding of the bouquet of images, with every edge carrying a
// weight in the source free group. Invariant: reading any closed path at the
// base vertex gives a label word v and a weight word w with phi(w) = v.
// Weights are moved between edges by gauge transformations at non-base
// vertices, which preserve that invariant.
class WeightedFolding {
 public:
  explicit WeightedFolding(const FreeAutomorphism& phi) : rank_(phi.rank()) {
    vertices_ = 1;
    for (int j = 0; j < rank_; ++j) {
      const auto& u = phi.images()[j].letters();
      if (u.empty()) {
        degenerate_ = true;
        return;
      }
      int cur = 0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        int next = (k + 1 == u.size()) ? 0 : vertices_++;
        Word weight = (k == 0) ? Word::generator(j + 1) : Word{};
        if (u[k] > 0) {
          edges_.push_back({cur, next, u[k], weight, true});
        } else {
          edges_.push_back({next, cur, -u[k], weight.inverse(), true});
        }
        cur = next;
      }
    }
  }

  /// Folds completely; returns the inverse images of the target generators
  /// when the folded graph is the standard rose, nullopt otherwise.
  std::optional<std::vector<Word>> run() {
    if (degenerate_) return std::nullopt;
    while (true) {
      auto fold = find_fold();
      if (!fold) break;
      if (!apply_fold(*fold)) return std::nullopt;
    }
    std::vector<std::optional<Word>> inv(rank_);
    int alive = 0;
    for (const auto& e : edges_) {
      if (!e.alive) continue;
      ++alive;
      if (e.from != 0 || e.to != 0) return std::nullopt;
      if (e.label < 1 || e.label > rank_ || inv[e.label - 1]) return std::nullopt;
      inv[e.label - 1] = e.weight;
    }
    if (alive != rank_) return std::nullopt;
    std::vector<Word> out;
    for (auto& w : inv) out.push_back(*w);
    return out;
  }

 private:
  struct Edge {
    int from;
    int to;
    int label;
    Word weight;
    bool alive;
  };
  struct Half {
    std::size_t edge;
    bool forward;
  };
  struct Fold {
    int p;
    Half h1;
    Half h2;
  };

  int target(const Half& h) const { return h.forward ? edges_[h.edge].to : edges_[h.edge].from; }
  int label(const Half& h) const { return h.forward ? edges_[h.edge].label : -edges_[h.edge].label; }
  Word weight(const Half& h) const {
    return h.forward ? edges_[h.edge].weight : edges_[h.edge].weight.inverse();
  }

  std::optional<Fold> find_fold() const {
    std::vector<std::vector<Half>> out(vertices_);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (!edges_[i].alive) continue;
      out[edges_[i].from].push_back({i, true});
      out[edges_[i].to].push_back({i, false});
    }
    for (int p = 0; p < vertices_; ++p) {
      for (std::size_t a = 0; a < out[p].size(); ++a) {
        for (std::size_t b = a + 1; b < out[p].size(); ++b) {
          if (out[p][a].edge != out[p][b].edge && label(out[p][a]) == label(out[p][b])) {
            return Fold{p, out[p][a], out[p][b]};
          }
        }
      }
    }
    return std::nullopt;
  }

  void gauge(int r, const Word& g) {
    Word ginv = g.inverse();
    for (auto& e : edges_) {
      if (!e.alive) continue;
      if (e.to == r) e.weight = e.weight * g;
      if (e.from == r) e.weight = ginv * e.weight;
    }
  }

  void merge(int from, int into) {
    for (auto& e : edges_) {
      if (e.from == from) e.from = into;
      if (e.to == from) e.to = into;
    }
  }

  bool apply_fold(const Fold& f) {
    int q1 = target(f.h1);
    int q2 = target(f.h2);
    if (q1 == q2) {
      if (!(weight(f.h1) == weight(f.h2))) return false;  // phi not injective
      edges_[f.h2.edge].alive = false;
      return true;
    }
    int survivor = q1;
    int merged = q2;
    if (q2 != f.p && q2 != 0) {
      gauge(q2, weight(f.h2).inverse() * weight(f.h1));
    } else if (q1 != f.p && q1 != 0) {
      gauge(q1, weight(f.h1).inverse() * weight(f.h2));
      survivor = q2;
      merged = q1;
    } else {
      // {q1, q2} = {p, base} with p != base: gauge at p, then merge p into base.
      Word g = (q2 == f.p) ? weight(f.h2).inverse() * weight(f.h1)
                           : weight(f.h1).inverse() * weight(f.h2);
      gauge(f.p, g);
      survivor = 0;
      merged = f.p;
    }
    if (!(weight(f.h1) == weight(f.h2))) return false;
    edges_[f.h2.edge].alive = false;
    merge(merged, survivor);
    return true;
  }

  int rank_;
  int vertices_ = 0;
  bool degenerate_ = false;
  std::vector<Edge> edges_;
};

}  // namespace detail

/// Inverse automorphism, or nullopt when phi is not an automorphism of F_n.
inline std::optional<FreeAutomorphism> invert(const FreeAutomorphism& phi) {
  detail::WeightedFolding folding(phi);
  auto inv = folding.run();
  if (!inv) return std::nullopt;
  FreeAutomorphism psi(std::move(*inv));
  if (!(compose(phi, psi) == FreeAutomorphism::identity(phi.rank())) ||
      !(compose(psi, phi) == FreeAutomorphism::identity(phi.rank()))) {
    return std::nullopt;
  }
  return psi;
}

inline bool is_automorphism(const FreeAutomorphism& phi) { return invert(phi).has_value(); }

// --- enumerations -------------------------------------------------------------

/// All letters of rank n in alphabet order.
inline std::vector<Letter> alphabet(int rank) {
  std::vector<Letter> a;
  for (int i = 1; i <= rank; ++i) {
    a.push_back(i);
    a.push_back(-i);
  }
  return a;
}

/// Nonempty reduced words of length <= horizon, in shortlex order.
inline std::vector<Word> enumerate_words(int rank, int horizon) {
  if (rank < 1 || horizon < 1) throw ValidationError("enumerate_words needs rank, horizon >= 1");
  const auto letters = alphabet(rank);
  std::vector<Word> out;
  std::vector<std::vector<Letter>> layer;
  for (auto l : letters) layer.push_back({l});
  for (int len = 1; len <= horizon; ++len) {
    std::vector<std::vector<Letter>> next;
    for (auto& w : layer) {
      out.push_back(Word::from_reduced(w));
      if (len == horizon) continue;
      for (auto l : letters) {
        if (l == -w.back()) continue;
        auto ext = w;
        ext.push_back(l);
        next.push_back(std::move(ext));
      }
    }
    layer = std::move(next);
  }
  return out;
}

/// Nontrivial conjugacy classes with cyclically reduced length <= horizon, in
/// shortlex order of canonical representatives.
inline std::vector<ConjClass> enumerate_classes(int rank, int horizon) {
  std::vector<ConjClass> out;
  for (const auto& w : enumerate_words(rank, horizon)) {
    if (!is_cyclically_reduced(w)) continue;
    if (!(least_rotation(w) == w)) continue;
    out.emplace_back(w);
  }
  return out;
}

}  // namespace auter

template <>
struct std::hash<auter::Word> {
  std::size_t operator()(const auter::Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto l : w.letters()) h = (h ^ static_cast<std::size_t>(l + 1024)) * 1099511628211ull;
    return h;
  }
};
