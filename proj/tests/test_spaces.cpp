#include "oracle.hpp"
#include "schreier_lab/spaces.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace schreier_lab;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }
Rational Q(long p, long q = 1) { return Rational(p, q); }

RatVec ones(std::uint64_t n) {
  std::vector<RatVec::Entry> e;
  for (std::uint64_t i = 1; i <= n; ++i) e.emplace_back(i, Q(1));
  return RatVec(std::move(e));
}

RatVec random_vec(std::mt19937_64& rng, std::uint64_t universe, std::size_t max_support, bool nonneg = false) {
  std::uniform_int_distribution<std::uint64_t> idx(1, universe);
  std::uniform_int_distribution<long> num(nonneg ? 1 : -9, 9), den(1, 6);
  std::uniform_int_distribution<std::size_t> size(0, max_support);
  std::vector<RatVec::Entry> e;
  const std::size_t k = size(rng);
  while (e.size() < k) {
    const auto i = idx(rng);
    bool dup = false;
    for (const auto& x : e) dup = dup || x.first == i;
    if (dup) continue;
    long p = num(rng);
    if (p == 0) p = 1;
    e.emplace_back(i, Q(p, den(rng)));
  }
  return RatVec(std::move(e));
}

/// Rational with numerator in [-span, span] minus zero and denominator in [1, 5].
Rational nonzero_coefficient(std::mt19937_64& rng, long span) {
  std::uniform_int_distribution<long> num(1, span), den(1, 5);
  const long p = num(rng);
  return Q((rng() & 1U) ? -p : p, den(rng));
}

}  // namespace

TEST(NormSpec, ParseAndName) {
  EXPECT_EQ(NormSpec::parse("schreier", O("2")), NormSpec::schreier(O("2")));
  EXPECT_EQ(NormSpec::parse("star", O("1")).to_string(), "star(1)");
  EXPECT_EQ(NormSpec::parse("l2").to_string(), "l2");
  EXPECT_THROW(NormSpec::parse("tsirelson"), std::invalid_argument);
}

TEST(Norm, ClassicalNorms) {
  SchreierHierarchy h;
  const RatVec x{{1, Q(3)}, {4, Q(-4)}};
  EXPECT_EQ(norm(h, NormSpec::l1(), x).value.exact, 7);
  const auto l2 = norm(h, NormSpec::l2(), x).value;
  EXPECT_TRUE(l2.squared);
  EXPECT_EQ(l2.exact, 25);
  EXPECT_DOUBLE_EQ(l2.approx(), 5.0);
  EXPECT_EQ(norm(h, NormSpec::sup(), x).value.exact, 4);
}

TEST(Norm, SchreierExamples) {
  SchreierHierarchy h;
  const auto r = norm(h, NormSpec::schreier(O("1")), ones(3));
  EXPECT_EQ(r.value.exact, 2);
  ASSERT_EQ(r.witness.size(), 1u);
  EXPECT_EQ(r.witness[0], (FinSet{2, 3}));
  const auto seven = norm_oracle(h, NormSpec::schreier(O("1")), ones(7));
  EXPECT_EQ(seven.value.exact, 4);
  EXPECT_EQ(seven.witness[0], (FinSet{4, 5, 6, 7}));
  EXPECT_EQ(norm(h, NormSpec::schreier(O("1")), ones(7)).witness[0], (FinSet{4, 5, 6, 7}));
  EXPECT_EQ(norm_oracle(h, NormSpec::schreier(O("1")), RatVec{}).value.exact, 0);
}

TEST(Norm, SchreierOneClosedFormAgainstBruteForce) {
  SchreierHierarchy h;
  for (std::uint64_t n = 1; n <= 20; ++n) {
    const Rational expected((n + 1) / 2);
    EXPECT_EQ(norm(h, NormSpec::schreier(O("1")), ones(n)).value.exact, expected) << n;
    if (n <= 14) EXPECT_EQ(oracle::finite_schreier_norm(1, ones(n)), expected) << n;
  }
}

TEST(Norm, StarAndBaernsteinExamples) {
  SchreierHierarchy h;
  const auto d = norm(h, NormSpec::schreier_star(O("1")), RatVec{{2, Q(1)}, {3, Q(-1)}});
  EXPECT_EQ(d.value.exact, 1);
  EXPECT_EQ(d.part, "+");
  const auto b = norm(h, NormSpec::baernstein2(O("1")), RatVec{{2, Q(1)}, {3, Q(1)}});
  EXPECT_TRUE(b.value.squared);
  EXPECT_EQ(b.value.exact, 4);
  ASSERT_EQ(b.witness.size(), 1u);
  EXPECT_EQ(b.witness[0], (FinSet{2, 3}));
  EXPECT_EQ(norm_oracle(h, NormSpec::baernstein2(O("1")), RatVec{{2, Q(1)}, {3, Q(1)}}).value.exact, 4);
  // e_1 + e_2: {1,2} is not admissible, so the best chain is {1} < {2}
  EXPECT_EQ(norm(h, NormSpec::baernstein2(O("1")), RatVec{{1, Q(1)}, {2, Q(1)}}).value.exact, 2);
}

TEST(Norm, AdmissibleCombinationsAreIsometricToL1) {
  SchreierHierarchy h;
  std::mt19937_64 rng(11);
  for (const char* xi : {"1", "2"}) {
    const auto fam = h.enumerate(O(xi), 12);
    for (int s = 0; s < 200; ++s) {
      const FinSet& f = fam[rng() % fam.size()];
      std::vector<RatVec::Entry> e;
      for (auto i : f) e.emplace_back(i, nonzero_coefficient(rng, 8));
      const RatVec x(std::move(e));
      EXPECT_EQ(norm(h, NormSpec::schreier(O(xi)), x).value.exact, x.l1());
    }
  }
}

TEST(Norm, BranchAndBoundEqualsOracle) {
  SchreierHierarchy h;
  std::mt19937_64 rng(12345);
  for (const char* xi : {"1", "2", "w"}) {
    for (const auto& spec : {NormSpec::schreier(O(xi)), NormSpec::schreier_star(O(xi)), NormSpec::baernstein2(O(xi))}) {
      for (int s = 0; s < 60; ++s) {
        const RatVec x = random_vec(rng, 14, 9);
        const auto fast = norm(h, spec, x);
        const auto slow = norm_oracle(h, spec, x);
        ASSERT_EQ(fast.value, slow.value) << spec.to_string() << " " << x.to_string();
        if (spec.kind != NormKind::Baernstein2) ASSERT_EQ(fast.witness, slow.witness) << spec.to_string();
      }
    }
  }
}

TEST(Norm, FiniteLevelsAgainstIndependentBruteForce) {
  SchreierHierarchy h;
  std::mt19937_64 rng(99);
  for (unsigned k = 1; k <= 3; ++k)
    for (int s = 0; s < 50; ++s) {
      const RatVec x = random_vec(rng, 12, 8);
      EXPECT_EQ(norm(h, NormSpec::schreier(Ordinal::natural(k)), x).value.exact, oracle::finite_schreier_norm(k, x));
    }
}

TEST(Norm, Axioms) {
  SchreierHierarchy h;
  std::mt19937_64 rng(5);
  for (const char* xi : {"1", "2"}) {
    for (const auto& spec : {NormSpec::schreier(O(xi)), NormSpec::schreier_star(O(xi))}) {
      for (int s = 0; s < 100; ++s) {
        const RatVec x = random_vec(rng, 16, 10), y = random_vec(rng, 16, 10);
        const Rational nx = norm(h, spec, x).value.exact;
        EXPECT_EQ(nx == 0, x.is_zero());
        EXPECT_EQ(norm(h, spec, x.scaled(Q(-7, 3))).value.exact, Q(7, 3) * nx);
        EXPECT_LE(norm(h, spec, x + y).value.exact, nx + norm(h, spec, y).value.exact);
      }
    }
  }
}

TEST(Norm, SchreierIsOneUnconditional) {
  SchreierHierarchy h;
  std::mt19937_64 rng(6);
  for (int s = 0; s < 100; ++s) {
    const RatVec x = random_vec(rng, 16, 10);
    std::vector<RatVec::Entry> flipped;
    for (const auto& [i, v] : x.entries()) flipped.emplace_back(i, (rng() & 1U) ? Rational(-v) : v);
    EXPECT_EQ(norm(h, NormSpec::schreier(O("2")), x).value, norm(h, NormSpec::schreier(O("2")), RatVec(flipped)).value);
  }
}

TEST(Norm, RenormingBounds) {
  SchreierHierarchy h;
  std::mt19937_64 rng(8);
  for (int s = 0; s < 200; ++s) {
    const RatVec x = random_vec(rng, 18, 12);
    const Rational plain = norm(h, NormSpec::schreier(O("1")), x).value.exact;
    const Rational star = norm(h, NormSpec::schreier_star(O("1")), x).value.exact;
    EXPECT_LE(star, plain);
    EXPECT_LE(plain, 2 * star);
    const RatVec y = x.abs();
    EXPECT_EQ(norm(h, NormSpec::schreier_star(O("1")), y).value.exact, norm(h, NormSpec::schreier(O("1")), y).value.exact);
  }
}

TEST(Norm, StarSpreadingHalfInequality) {
  SchreierHierarchy h;
  std::mt19937_64 rng(9);
  const auto fam = h.enumerate(O("2"), 12);
  for (int s = 0; s < 300; ++s) {
    const FinSet& f = fam[1 + rng() % (fam.size() - 1)];
    std::vector<RatVec::Entry> e;
    for (auto i : f) e.emplace_back(i, nonzero_coefficient(rng, 9));
    const RatVec x(std::move(e));
    EXPECT_GE(norm(h, NormSpec::schreier_star(O("2")), x).value.exact, x.l1() / 2);
  }
}

TEST(Norm, Budgets) {
  Budget b;
  b.schreier_norm_support = 4;
  b.oracle_norm_support = 3;
  b.baernstein_norm_support = 2;
  SchreierHierarchy h(default_fundamental_sequence, b);
  EXPECT_THROW(norm(h, NormSpec::schreier(O("1")), ones(5)), BudgetExceeded);
  EXPECT_THROW(norm_oracle(h, NormSpec::schreier(O("1")), ones(4)), BudgetExceeded);
  EXPECT_THROW(norm(h, NormSpec::baernstein2(O("1")), ones(3)), BudgetExceeded);
  EXPECT_NO_THROW(norm(h, NormSpec::l1(), ones(50)));
}

TEST(NormValue, ComparesAcrossSquaring) {
  const NormValue sq{Q(4), true};
  EXPECT_EQ(sq.compare(2), 0);
  EXPECT_LT(sq.compare(3), 0);
  EXPECT_EQ(sq.divided_by(2).exact, 1);
  EXPECT_EQ(sq.to_string(), "sqrt(4)");
  EXPECT_THROW((void)(sq < NormValue{Q(1), false}), std::logic_error);
}

// ---------------------------------------------------------------- functionals

TEST(Functional, CoordinateSumExamples) {
  SchreierHierarchy h;
  const auto f = coordinate_sum_functional(h, FinSet{2, 3}, NormSpec::schreier_star(O("1")));
  EXPECT_EQ(f.evaluate(RatVec{{2, Q(1)}, {3, Q(-1)}}), 0);
  EXPECT_EQ(f.evaluate(RatVec{{2, Q(1)}, {3, Q(1)}}), 2);
  EXPECT_TRUE(f.certified_for(NormSpec::schreier_star(O("1"))));
  EXPECT_THROW(coordinate_sum_functional(h, FinSet{1, 2}, NormSpec::schreier(O("1"))), CertificationRefused);
  EXPECT_THROW(coordinate_sum_functional(h, FinSet{2, 3}, NormSpec::l1()), CertificationRefused);
}

TEST(Functional, CertifiedEvaluationNeverExceedsNorm) {
  SchreierHierarchy h;
  std::mt19937_64 rng(21);
  for (const char* xi : {"1", "2"}) {
    const auto fam = h.enumerate(O(xi), 12);
    for (const auto& spec : {NormSpec::schreier(O(xi)), NormSpec::schreier_star(O(xi))}) {
      for (int s = 0; s < 500; ++s) {
        const auto f = coordinate_sum_functional(h, fam[rng() % fam.size()], spec);
        const RatVec x = random_vec(rng, 12, 10);
        EXPECT_NO_THROW(f.evaluate_in_ball(h, x));
      }
    }
  }
}

TEST(Functional, UncertifiedAndViolatedCertificates) {
  SchreierHierarchy h;
  const Functional plain(RatVec{{1, Q(1)}});
  EXPECT_THROW(plain.evaluate_in_ball(h, RatVec::unit(1)), UncertifiedFunctional);
  const Functional lying(RatVec{{1, Q(1)}, {2, Q(1)}}, NormSpec::schreier(O("1")));
  EXPECT_THROW(lying.evaluate_in_ball(h, RatVec{{1, Q(1)}, {2, Q(1)}}), std::logic_error);
}
