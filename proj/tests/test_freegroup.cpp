#include <gtest/gtest.h>

#include <random>
#include <set>

#include "auter/freegroup.hpp"

using namespace auter;

namespace {

Word w(const char* s, int rank = 3) { return parse_word(s, rank); }

std::vector<Letter> random_raw(std::mt19937_64& rng, int rank, int len) {
  std::vector<Letter> raw;
  for (int i = 0; i < len; ++i) {
    int g = 1 + static_cast<int>(rng() % rank);
    raw.push_back(rng() % 2 ? g : -g);
  }
  return raw;
}

FreeAutomorphism random_aut(std::mt19937_64& rng, int rank) {
  // Products of elementary Nielsen moves stay automorphisms.
  auto phi = FreeAutomorphism::identity(rank);
  for (int k = 0; k < 4; ++k) {
    std::vector<Word> im = phi.images();
    int i = static_cast<int>(rng() % rank);
    int j = static_cast<int>(rng() % rank);
    if (i == j) {
      im[i] = im[i].inverse();
    } else {
      im[i] = rng() % 2 ? im[i] * im[j] : im[j].inverse() * im[i];
    }
    phi = FreeAutomorphism(im);
  }
  return phi;
}

}  // namespace

TEST(Reduce, Examples) {
  EXPECT_TRUE(reduce({1, -1}).empty());
  EXPECT_EQ(reduce({1, 2}), w("x1 x2"));
  EXPECT_EQ(reduce({1, 2, -2, 1}), w("x1 x1"));
}

TEST(Reduce, RejectsUnknownGenerator) { EXPECT_THROW(reduce({1, 4}, 3), ValidationError); }

TEST(Reduce, IdempotentAndParity) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    auto u = reduce(random_raw(rng, 3, static_cast<int>(rng() % 8)));
    auto v = reduce(random_raw(rng, 3, static_cast<int>(rng() % 8)));
    EXPECT_EQ(reduce(u.letters()), u);
    auto uv = u * v;
    EXPECT_LE(uv.size(), u.size() + v.size());
    EXPECT_EQ(uv.size() % 2, (u.size() + v.size()) % 2);
  }
}

TEST(CyclicReduce, Examples) {
  auto a = cyclic_reduce(w("x1 x2 ~x1"));
  EXPECT_EQ(a.core, w("x2"));
  EXPECT_EQ(a.conjugator, w("x1"));
  auto b = cyclic_reduce(w("x1 x2"));
  EXPECT_EQ(b.core, w("x1 x2"));
  EXPECT_TRUE(b.conjugator.empty());
  auto c = cyclic_reduce(w("x1 x2 x2 ~x1"));
  EXPECT_EQ(c.core, w("x2 x2"));
  EXPECT_EQ(c.conjugator, w("x1"));
}

TEST(CyclicReduce, Reassembles) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 300; ++t) {
    auto x = reduce(random_raw(rng, 2, 7));
    auto c = cyclic_reduce(x);
    EXPECT_TRUE(is_cyclically_reduced(c.core));
    EXPECT_EQ(c.conjugator * c.core * c.conjugator.inverse(), x);
  }
}

TEST(ApplyAut, Examples) {
  auto id = FreeAutomorphism::identity(2);
  EXPECT_EQ(apply_aut(id, w("x1 ~x2 x1", 2)), w("x1 ~x2 x1", 2));
  FreeAutomorphism swap({w("x2", 2), w("x1", 2)});
  EXPECT_EQ(apply_aut(swap, w("x1 ~x2", 2)), w("x2 ~x1", 2));
  FreeAutomorphism tr({w("x1", 2), w("x1 x2", 2)});
  EXPECT_EQ(apply_aut(tr, w("x2", 2)), w("x1 x2", 2));
}

TEST(ApplyAut, CompositionLaw) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + static_cast<int>(rng() % 2);
    auto phi = random_aut(rng, n);
    auto psi = random_aut(rng, n);
    auto x = reduce(random_raw(rng, n, 1 + static_cast<int>(rng() % 6)));
    EXPECT_EQ(apply_aut(compose(phi, psi), x), apply_aut(phi, apply_aut(psi, x)));
  }
}

TEST(ApplyAut, InverseRecovered) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 100; ++t) {
    auto phi = random_aut(rng, 3);
    auto inv = invert(phi);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(compose(*inv, phi), FreeAutomorphism::identity(3));
  }
  FreeAutomorphism square({w("x1 x1", 2), w("x2", 2)});
  EXPECT_FALSE(is_automorphism(square));
}

TEST(EnumerateWords, Examples) {
  EXPECT_EQ(enumerate_words(1, 1), (std::vector<Word>{w("x1", 1), w("~x1", 1)}));
  EXPECT_EQ(enumerate_words(2, 1), (std::vector<Word>{w("x1", 2), w("~x1", 2), w("x2", 2), w("~x2", 2)}));
  EXPECT_EQ(enumerate_words(2, 2).size(), 16u);
}

TEST(EnumerateWords, ShortlexAndComplete) {
  for (int n = 1; n <= 3; ++n) {
    for (int h = 1; h <= 4; ++h) {
      auto ws = enumerate_words(n, h);
      for (std::size_t i = 1; i < ws.size(); ++i) EXPECT_TRUE(ws[i - 1] < ws[i]);
      // Brute force: every raw sequence of length <= h that is already reduced.
      std::set<Word> brute;
      std::vector<Letter> letters = alphabet(n);
      std::vector<std::vector<Letter>> layer{{}};
      for (int len = 1; len <= h; ++len) {
        std::vector<std::vector<Letter>> next;
        for (const auto& p : layer) {
          for (auto l : letters) {
            if (!p.empty() && p.back() == -l) continue;
            auto q = p;
            q.push_back(l);
            brute.insert(Word::from_reduced(q));
            next.push_back(q);
          }
        }
        layer = next;
      }
      EXPECT_EQ(std::set<Word>(ws.begin(), ws.end()), brute);
    }
  }
}

TEST(EnumerateClasses, Examples) {
  auto c21 = enumerate_classes(2, 1);
  ASSERT_EQ(c21.size(), 4u);
  EXPECT_EQ(c21[0].to_string(), "[x1]");
  EXPECT_EQ(c21[1].to_string(), "[~x1]");
  EXPECT_EQ(c21[2].to_string(), "[x2]");
  EXPECT_EQ(c21[3].to_string(), "[~x2]");
  auto c12 = enumerate_classes(1, 2);
  ASSERT_EQ(c12.size(), 4u);
  EXPECT_EQ(c12[2], ConjClass(w("x1 x1", 1)));
  EXPECT_EQ(c12[3], ConjClass(w("~x1 ~x1", 1)));
  auto c22 = enumerate_classes(2, 2);
  EXPECT_EQ(ConjClass(w("x2 x1", 2)), ConjClass(w("x1 x2", 2)));
  EXPECT_EQ(std::count(c22.begin(), c22.end(), ConjClass(w("x1 x2", 2))), 1);
  // A class and its inverse are separate.
  EXPECT_NE(ConjClass(w("x1", 2)), ConjClass(w("~x1", 2)));
}

TEST(ConjClass, MatchesRotationBruteForce) {
  std::mt19937_64 rng(15);
  auto rotations = [](const Word& x) {
    std::set<Word> out;
    auto l = cyclic_reduce(x).core.letters();
    for (std::size_t r = 0; r < std::max<std::size_t>(l.size(), 1); ++r) {
      std::vector<Letter> rot(l.begin() + r, l.end());
      rot.insert(rot.end(), l.begin(), l.begin() + r);
      out.insert(Word::from_reduced(rot));
    }
    return out;
  };
  for (int t = 0; t < 400; ++t) {
    auto a = reduce(random_raw(rng, 2, 1 + static_cast<int>(rng() % 6)));
    auto b = reduce(random_raw(rng, 2, 1 + static_cast<int>(rng() % 6)));
    if (t % 3 == 0) {
      auto g = reduce(random_raw(rng, 2, 2));
      b = g * a * g.inverse();
    }
    EXPECT_EQ(ConjClass(a) == ConjClass(b), rotations(a) == rotations(b)) << a.to_string() << " / " << b.to_string();
  }
}

TEST(ParseWord, Errors) {
  EXPECT_THROW(parse_word("x1 y2", 2), ValidationError);
  EXPECT_THROW(parse_word("x3", 2), ValidationError);
  EXPECT_TRUE(parse_word("1", 2).empty());
}
