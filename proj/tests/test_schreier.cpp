#include "oracle.hpp"
#include "schreier_lab/schreier.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <thread>

using namespace schreier_lab;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// ---------------------------------------------------------------- FinSet

TEST(FinSet, ParseAndFormat) {
  EXPECT_EQ(FinSet::parse("2,3,7"), (FinSet{2, 3, 7}));
  EXPECT_EQ(FinSet::parse("{ 2, 3 }"), (FinSet{2, 3}));
  EXPECT_TRUE(FinSet::parse("").empty());
  EXPECT_TRUE(FinSet::parse("{}").empty());
  EXPECT_EQ((FinSet{2, 3, 7}).to_string(), "2,3,7");
  EXPECT_THROW(FinSet::parse("3,2"), std::invalid_argument);
  EXPECT_THROW(FinSet::parse("0,1"), std::invalid_argument);
  EXPECT_THROW(FinSet::parse("1,,2"), std::invalid_argument);
  EXPECT_THROW(FinSet::parse("1,a"), std::invalid_argument);
}

TEST(FinSet, LexicographicOrder) {
  EXPECT_LT(FinSet{}, (FinSet{1}));
  EXPECT_LT((FinSet{2}), (FinSet{2, 3}));
  EXPECT_LT((FinSet{2, 3}), (FinSet{3}));
}

// ---------------------------------------------------------------- IndexStream

TEST(IndexStream, BuiltinRules) {
  EXPECT_EQ(IndexStream::all().element(5), 5u);
  EXPECT_EQ(IndexStream::shift(1).element(1), 2u);
  EXPECT_EQ(IndexStream::cubes().element(4), 64u);
  EXPECT_EQ(IndexStream::evens().element(3), 6u);
  EXPECT_EQ(IndexStream::parse("shift:3").element(2), 5u);
  EXPECT_THROW(IndexStream::parse("shift:"), std::invalid_argument);
  EXPECT_THROW(IndexStream::parse("primes"), std::invalid_argument);
  EXPECT_THROW(IndexStream::all().element(0), std::out_of_range);
}

TEST(IndexStream, PositionOfAndContains) {
  const auto c = IndexStream::cubes();
  EXPECT_EQ(c.position_of(27), 3u);
  EXPECT_FALSE(c.position_of(28).has_value());
  EXPECT_FALSE(c.contains(0));
  EXPECT_TRUE(IndexStream::shift(1).contains(2));
  EXPECT_FALSE(IndexStream::shift(1).contains(1));
  EXPECT_EQ(c.position_of(2097152), 128u);  // 128^3
}

TEST(IndexStream, ExplicitPrefixAndDrop) {
  const auto m = IndexStream::explicit_prefix(FinSet{2, 5, 9}, 6);
  EXPECT_EQ(m.element(3), 9u);
  EXPECT_EQ(m.element(4), 10u);
  EXPECT_EQ(m.drop(2).element(1), 9u);
  EXPECT_EQ(m.drop(2).name(), m.name() + ">>2");
  EXPECT_THROW(IndexStream::explicit_prefix(FinSet{2, 50}, 0), std::invalid_argument);
}

TEST(IndexStream, CustomMemoChecksMonotonicity) {
  const auto squares = IndexStream::custom("squares", [](std::uint64_t n) { return n * n; });
  EXPECT_EQ(squares.element(10), 100u);
  const auto broken = IndexStream::custom("broken", [](std::uint64_t n) { return n < 3 ? n : 1; });
  EXPECT_THROW(broken.element(3), std::logic_error);
}

TEST(IndexStream, ComposeIsARefinement) {
  const auto m = IndexStream::cubes().compose(IndexStream::evens());
  for (std::uint64_t n = 1; n <= 10; ++n) EXPECT_EQ(m.element(n), 8 * n * n * n);
}

TEST(IndexStream, SharedMemoAcrossThreads) {
  const auto m = IndexStream::custom("tri", [](std::uint64_t n) { return n * (n + 1) / 2; });
  std::vector<std::thread> pool;
  std::vector<std::uint64_t> got(8);
  for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { got[t] = m.element(500 + t); });
  for (auto& th : pool) th.join();
  for (int t = 0; t < 8; ++t) EXPECT_EQ(got[t], (500u + t) * (501u + t) / 2);
}

// ---------------------------------------------------------------- membership

TEST(Membership, Examples) {
  SchreierHierarchy h;
  EXPECT_TRUE(h.is_member(O("1"), FinSet{2, 3}));
  EXPECT_FALSE(h.is_member(O("1"), FinSet{1, 2}));
  EXPECT_TRUE(h.is_member(O("2"), FinSet{2, 3, 4, 5, 6, 7}));
  EXPECT_TRUE(h.is_member_oracle(O("1"), FinSet{}));
  EXPECT_TRUE(h.is_member_oracle(O("0"), FinSet{5}));
  EXPECT_FALSE(h.is_member_oracle(O("2"), FinSet{1, 2, 3}));
  EXPECT_EQ(h.greedy_piece_count(O("2"), FinSet{2, 3, 4, 5, 6, 7}), 2u);
}

TEST(Membership, EmptySetInEveryFamily) {
  SchreierHierarchy h;
  for (const char* xi : {"0", "1", "5", "w", "w+1", "w^2"}) {
    EXPECT_TRUE(h.is_member(O(xi), FinSet{}));
    EXPECT_TRUE(h.is_member_oracle(O(xi), FinSet{}));
  }
}

TEST(Membership, S1ClosedForm) {
  SchreierHierarchy h;
  for (const auto& f : oracle::all_subsets(12)) EXPECT_EQ(h.is_member(O("1"), FinSet(f)), oracle::in_s1(f));
}

TEST(Membership, FiniteLevelsAgainstIndependentOracle) {
  SchreierHierarchy h;
  for (unsigned k = 0; k <= 3; ++k)
    for (const auto& f : oracle::all_subsets(9))
      ASSERT_EQ(h.is_member(Ordinal::natural(k), FinSet(f)), oracle::in_finite_schreier(k, f))
          << "k=" << k << " F=" << FinSet(f).to_string();
}

TEST(Membership, GreedyEqualsExhaustiveOracle) {
  SchreierHierarchy h;
  for (const char* xi : {"0", "1", "2", "w", "w+1", "w*2", "w^2"})
    for (const auto& f : oracle::all_subsets(9))
      ASSERT_EQ(h.is_member(O(xi), FinSet(f)), h.is_member_oracle(O(xi), FinSet(f)))
          << "xi=" << xi << " F=" << FinSet(f).to_string();
}

TEST(Membership, LimitUsesFundamentalSequence) {
  SchreierHierarchy h;
  // S_w = {F : F in S_n, n <= min F}; with the default rule xi_n = n
  EXPECT_TRUE(h.is_member(O("w"), FinSet{2, 3, 4, 5, 6, 7}));  // in S_2, min 2
  EXPECT_FALSE(h.is_member(O("w"), FinSet{1, 2}));
  SchreierHierarchy shifted([](const Ordinal& x, std::uint64_t n) { return default_fundamental_sequence(x, n + 1); });
  const FinSet f = FinSet::interval(2, 8);  // in S_3 but not S_2
  EXPECT_FALSE(h.is_member(O("w"), f));
  EXPECT_TRUE(shifted.is_member(O("w"), f));
}

TEST(Membership, OracleBudget) {
  Budget b;
  b.oracle_set_size = 4;
  SchreierHierarchy h(default_fundamental_sequence, b);
  EXPECT_THROW(h.is_member_oracle(O("1"), FinSet{5, 6, 7, 8, 9}), BudgetExceeded);
}

// ---------------------------------------------------------------- enumeration

TEST(Enumerate, SmallFamilies) {
  SchreierHierarchy h;
  EXPECT_EQ(h.enumerate(O("0"), 3), (std::vector<FinSet>{{}, {1}, {2}, {3}}));
  EXPECT_EQ(h.enumerate(O("1"), 3), (std::vector<FinSet>{{}, {1}, {2}, {2, 3}, {3}}));
}

TEST(Enumerate, S1CountFormula) {
  SchreierHierarchy h;
  for (std::uint64_t n = 1; n <= 16; ++n) {
    std::uint64_t expected = 1;
    for (std::uint64_t k = 1; k <= n; ++k)
      for (std::uint64_t j = 0; j < k; ++j) expected += binom(n - k, j);
    EXPECT_EQ(h.enumerate(O("1"), n).size(), expected) << n;
  }
}

TEST(Enumerate, LexicographicUniqueAndComplete) {
  SchreierHierarchy h;
  for (const char* xi : {"1", "2", "w"}) {
    const auto fam = h.enumerate(O(xi), 9);
    for (std::size_t i = 1; i < fam.size(); ++i) ASSERT_LT(fam[i - 1], fam[i]);
    std::size_t members = 0;
    for (const auto& f : oracle::all_subsets(9)) members += h.is_member_oracle(O(xi), FinSet(f));
    EXPECT_EQ(fam.size(), members);
  }
}

TEST(Enumerate, Budgets) {
  Budget b;
  b.enum_universe = 8;
  SchreierHierarchy h(default_fundamental_sequence, b);
  EXPECT_THROW(h.enumerate(O("1"), 9), BudgetExceeded);
  b.max_family_size = 10;
  SchreierHierarchy tight(default_fundamental_sequence, b);
  EXPECT_THROW(tight.enumerate(O("2"), 8), BudgetExceeded);
}

// ---------------------------------------------------------------- structure

TEST(Structure, HereditarySpreadingNesting) {
  SchreierHierarchy h;
  const std::uint64_t n = 9;
  for (const char* xi : {"0", "1", "2", "w"}) {
    const Ordinal x = O(xi);
    const auto fam = h.enumerate(x, n);
    const auto bigger = h.enumerate(x.successor(), n);
    const std::set<FinSet> next(bigger.begin(), bigger.end());
    for (const auto& f : fam) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.size()); ++mask)
        ASSERT_TRUE(h.is_member(x, f.select(mask)));
      ASSERT_TRUE(next.contains(f)) << xi << " " << f.to_string();
      // spreading: push the last element right
      if (!f.empty()) {
        for (std::uint64_t g = f.max() + 1; g <= n; ++g) {
          FinSet moved = f;
          moved.pop_back();
          moved.push_back(g);
          ASSERT_TRUE(h.is_member(x, moved));
        }
      }
    }
  }
}

// ---------------------------------------------------------------- images, traces

TEST(ImageTrace, Examples) {
  SchreierHierarchy h;
  const auto shift1 = IndexStream::shift(1);
  EXPECT_FALSE(h.is_member_image(O("1"), shift1, FinSet{2, 3}));
  EXPECT_TRUE(h.is_member_image(O("1"), IndexStream::all(), FinSet{2, 3}));
  EXPECT_TRUE(h.is_member_image(O("1"), shift1, FinSet{3, 4}));
  EXPECT_TRUE(h.trace_member(O("1"), shift1, FinSet{2, 3}));
  EXPECT_FALSE(h.trace_member(O("1"), IndexStream::all(), FinSet{1, 2}));
  EXPECT_TRUE(h.trace_member(O("2"), IndexStream::evens(), FinSet{4, 6}));
  EXPECT_FALSE(h.trace_member(O("2"), IndexStream::evens(), FinSet{4, 5}));
  EXPECT_EQ(SchreierHierarchy::preimage(IndexStream::cubes(), FinSet{8, 27}), (FinSet{2, 3}));
}

TEST(ImageTrace, ImageInsideTrace) {
  SchreierHierarchy h;
  std::mt19937_64 rng(7);
  const std::vector<IndexStream> streams = {IndexStream::shift(1), IndexStream::evens(), IndexStream::cubes(),
                                            IndexStream::shift(3)};
  for (const char* xi : {"1", "2", "w"}) {
    for (const auto& m : streams) {
      for (int s = 0; s < 300; ++s) {
        std::vector<std::uint64_t> pos;
        for (std::uint64_t p = 1; p <= 8; ++p)
          if (rng() & 1U) pos.push_back(p);
        std::vector<std::uint64_t> img;
        for (auto p : pos) img.push_back(m.element(p));
        const FinSet f(img);
        if (h.is_member_image(O(xi), m, f)) ASSERT_TRUE(h.trace_member(O(xi), m, f));
      }
    }
  }
}

// ---------------------------------------------------------------- thresholds

TEST(Threshold, Examples) {
  SchreierHierarchy h;
  EXPECT_EQ(h.threshold(O("0"), O("1"), 10), 1u);
  const auto t = h.threshold(O("1"), O("2"), 12);
  ASSERT_TRUE(t.has_value());
  EXPECT_LE(*t, 2u);
  EXPECT_EQ(h.threshold(O("0"), O("1"), 12), 1u);
  EXPECT_EQ(h.threshold(O("1"), O("2"), 12), 1u);
  EXPECT_THROW(h.threshold(O("2"), O("1"), 5), std::invalid_argument);
}

TEST(Threshold, CertifiedOnWindow) {
  SchreierHierarchy h;
  const auto t = h.threshold(O("2"), O("w"), 12);
  ASSERT_TRUE(t.has_value());
  for (const auto& f : h.enumerate(O("2"), 12))
    if (!f.empty() && f.min() >= *t) ASSERT_TRUE(h.is_member(O("w"), f)) << f.to_string();
}
