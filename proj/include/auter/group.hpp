#pragma once

// Finite groups realized as permutation groups on the directed edges of a
// graph. Element 0 is always the identity; element order is fixed at
// construction so that per-element data (realizing automorphisms) survives
// graph surgery.

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "auter/error.hpp"

namespace auter {

using Perm = std::vector<int>;

/// p o q: apply q first.
inline Perm compose_perm(const Perm& p, const Perm& q) {
  Perm r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

/// Sorted list of element indices.
using Subgroup = std::vector<int>;

class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup({identity_perm(0)}, {}, {}) {}

  /// Elements given explicitly as permutations of the directed edges, element
  /// 0 the identity. Multiplication is read off by composing permutations; a
  /// set that is not closed is a ValidationError.
  FiniteGroup(std::vector<Perm> elements, std::vector<int> generators,
              std::vector<std::string> generator_names)
      : perms_(std::move(elements)),
        generators_(std::move(generators)),
        generator_names_(std::move(generator_names)) {
    if (perms_.empty()) throw ValidationError("group needs an identity element");
    const std::size_t n = perms_.size();
    if (perms_[0] != identity_perm(perms_[0].size())) {
      throw ValidationError("group element 0 must be the identity");
    }
    std::map<Perm, int> index;
    for (std::size_t i = 0; i < n; ++i) {
      if (!index.emplace(perms_[i], static_cast<int>(i)).second) {
        throw ValidationError("group elements are not distinct (action not faithful)");
      }
    }
    mul_.assign(n, std::vector<int>(n));
    inv_.assign(n, -1);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        auto it = index.find(compose_perm(perms_[a], perms_[b]));
        if (it == index.end()) throw ValidationError("group elements are not closed under composition");
        mul_[a][b] = it->second;
        if (it->second == 0) inv_[a] = static_cast<int>(b);
      }
    }
  }

  /// Closure of the generator permutations, elements in breadth-first order of
  /// words in the generators.
  static FiniteGroup generated_by(const std::vector<Perm>& gens, std::vector<std::string> names,
                                  std::size_t degree, std::size_t limit = 5040) {
    std::vector<Perm> elems{identity_perm(degree)};
    std::map<Perm, int> seen{{elems[0], 0}};
    std::deque<int> queue{0};
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (const auto& g : gens) {
        Perm next = compose_perm(g, elems[cur]);
        if (seen.count(next)) continue;
        if (elems.size() >= limit) throw ValidationError("generated group exceeds size limit");
        seen.emplace(next, static_cast<int>(elems.size()));
        queue.push_back(static_cast<int>(elems.size()));
        elems.push_back(std::move(next));
      }
    }
    std::vector<int> gen_idx;
    for (const auto& g : gens) gen_idx.push_back(seen.at(g));
    return FiniteGroup(std::move(elems), std::move(gen_idx), std::move(names));
  }

  int order() const noexcept { return static_cast<int>(perms_.size()); }
  int identity() const noexcept { return 0; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int inverse(int a) const { return inv_[a]; }
  const Perm& perm(int g) const { return perms_[g]; }
  int act(int g, int directed_edge) const { return perms_[g][directed_edge]; }

  const std::vector<int>& generators() const noexcept { return generators_; }
  const std::vector<std::string>& generator_names() const noexcept { return generator_names_; }

  /// All elements as a subgroup.
  Subgroup whole() const {
    Subgroup s(order());
    std::iota(s.begin(), s.end(), 0);
    return s;
  }

  bool is_subgroup(const Subgroup& h) const {
    if (h.empty() || !std::binary_search(h.begin(), h.end(), 0)) return false;
    for (int a : h) {
      for (int b : h) {
        if (!std::binary_search(h.begin(), h.end(), mul(a, b))) return false;
      }
    }
    return true;
  }

  Subgroup generate(const std::vector<int>& elems) const {
    std::set<int> s{0};
    std::deque<int> queue{0};
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      for (int g : elems) {
        int next = mul(g, cur);
        if (s.insert(next).second) queue.push_back(next);
      }
    }
    return Subgroup(s.begin(), s.end());
  }

  /// Every subgroup, sorted by (size, elements).
  std::vector<Subgroup> subgroups() const {
    std::set<Subgroup> found{Subgroup{0}};
    std::deque<Subgroup> queue{Subgroup{0}};
    while (!queue.empty()) {
      Subgroup h = queue.front();
      queue.pop_front();
      for (int g = 0; g < order(); ++g) {
        if (std::binary_search(h.begin(), h.end(), g)) continue;
        auto gens = h;
        gens.push_back(g);
        Subgroup k = generate(gens);
        if (found.insert(k).second) queue.push_back(k);
      }
    }
    std::vector<Subgroup> out(found.begin(), found.end());
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
  }

  /// Left coset representatives of h in k (h must be a subgroup of k): one
  /// element of each coset xh, least index first.
  std::vector<int> coset_reps(const Subgroup& k, const Subgroup& h) const {
    std::vector<int> reps;
    std::set<int> covered;
    for (int x : k) {
      if (covered.count(x)) continue;
      reps.push_back(x);
      for (int y : h) covered.insert(mul(x, y));
    }
    return reps;
  }

  /// Representatives of the double cosets P x Q in the whole group.
  std::vector<int> double_coset_reps(const Subgroup& p, const Subgroup& q) const {
    std::vector<int> reps;
    std::set<int> covered;
    for (int x = 0; x < order(); ++x) {
      if (covered.count(x)) continue;
      reps.push_back(x);
      for (int a : p) {
        for (int b : q) covered.insert(mul(mul(a, x), b));
      }
    }
    return reps;
  }

  /// Product of sub-lists used for sets like P x: { p x : p in P }.
  std::vector<int> left_multiply(const Subgroup& p, int x) const {
    std::vector<int> out;
    for (int a : p) out.push_back(mul(a, x));
    std::sort(out.begin(), out.end());
    return out;
  }

  bool subgroup_contains(const Subgroup& big, const Subgroup& small) const {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
  }

 private:
  std::vector<Perm> perms_;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  std::vector<int> generators_;
  std::vector<std::string> generator_names_;
};

}  // namespace auter
