#pragma once

/**
 * @file verify.hpp
 * @brief Batch verification of the unit-vector examples in X_{xi+1} and its
 *        star renorming, and of the closed-form Cesaro bound along cubes.
 *
 * Sampling uses a fixed seed, enumerations run in lexicographic order, and
 * all values are exact, so a report depends only on its arguments.
 */

#include "finset.hpp"
#include "index_stream.hpp"
#include "ordinal.hpp"
#include "quantities.hpp"
#include "rat_vec.hpp"
#include "report.hpp"
#include "schreier.hpp"
#include "spaces.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace schreier_lab {

struct VerifyOptions {
  Ordinal xi;
  std::uint64_t n = 12;
  std::size_t coeff_budget = 4;
  std::optional<Rational> c;   // largeness constant; 1 - 1/N when absent
  std::size_t samples = 200;
  std::uint64_t seed = 20240607;
};

namespace detail {

inline Json options_json(const VerifyOptions& o, const Rational& c) {
  return Json{{"xi", o.xi.to_string()}, {"N", o.n},           {"coeff_budget", o.coeff_budget},
              {"c", to_string(c)},      {"samples", o.samples}, {"seed", o.seed}};
}

/// Random rational p/q with 1 <= |p| <= 9, 1 <= q <= 9.
inline Rational random_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 9), den(1, 9), sign(0, 1);
  const int p = num(rng);
  return Rational(sign(rng) ? -p : p, den(rng));
}

/// Random vector on a non-empty random subset of {1..n}.
inline RatVec random_vector(std::mt19937_64& rng, std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> mask_dist(1, (std::uint64_t{1} << n) - 1);
  const std::uint64_t mask = mask_dist(rng);
  std::vector<RatVec::Entry> e;
  for (std::uint64_t i = 0; i < n; ++i)
    if (mask >> i & 1U) e.emplace_back(i + 1, random_coefficient(rng));
  return RatVec(std::move(e));
}

inline Json sm_json(const SmResult& sm) {
  Json a = Json::array();
  for (const auto& q : sm.witness_coeffs) a.push_back(to_string(q));
  return Json{{"estimate", to_json(sm.estimate)},
              {"witness", {{"F", to_json(sm.witness_set)}, {"a", a}}},
              {"sets_tested", sm.sets_tested},
              {"combinations_tested", sm.combinations_tested}};
}

inline Json large_json(const LargeCheck& lc, const Rational& c) {
  Json o{{"c", to_string(c)},
         {"holds", lc.holds},
         {"sets_checked", lc.sets_checked},
         {"family_size", lc.family_size},
         {"certified_evaluations", lc.certified_evaluations}};
  if (lc.failing) o["failing_set"] = to_json(*lc.failing);
  return o;
}

/// Largeness of the basis against all sum functionals of S_{xi+1}, certified for `ambient`.
inline void largeness_check(Report& report, const SchreierHierarchy& h, const Ordinal& family, const SeqSpec& basis,
                            const Rational& c, std::uint64_t n, std::vector<Functional>& gamma) {
  gamma = sum_functionals(h, family, n, basis.ambient());
  try {
    const LargeCheck lc = large_check(h, family, c, basis, IndexStream::all(), gamma, n);
    report.check("large_check", lc.holds,
                 "every set of S_" + family.to_string() + " inside {1.." + std::to_string(n) +
                     "} is normed at level c by one sum functional",
                 large_json(lc, c));
  } catch (const std::logic_error& e) {
    report.check("large_check", false, "sum functionals lie in the dual unit ball", Json{{"error", e.what()}});
  }
}

/// |f(x)| <= ||x|| for random x and random f drawn from gamma.
inline void dual_sampling_check(Report& report, const SchreierHierarchy& h, const std::vector<Functional>& gamma,
                                std::uint64_t n, std::size_t samples, std::mt19937_64& rng) {
  std::size_t violations = 0;
  Json first_violation;
  if (!gamma.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, gamma.size() - 1);
    for (std::size_t s = 0; s < samples; ++s) {
      const Functional& f = gamma[pick(rng)];
      const RatVec x = random_vector(rng, n);
      try {
        f.evaluate_in_ball(h, x);
      } catch (const std::logic_error&) {
        if (violations++ == 0) first_violation = Json{{"functional", to_json(f.entries())}, {"x", to_json(x)}};
      }
    }
  }
  Json details{{"samples", samples}, {"functionals", gamma.size()}, {"violations", violations}};
  if (violations) details["first_violation"] = first_violation;
  report.check("dual_certificates", violations == 0, "sum functionals over admissible sets have dual norm <= 1",
               details);
}

}  // namespace detail

/**
 * Unit vector basis of X_{xi+1}: spreading constant exactly 1, (xi+1, c)-large
 * at c = 1 - 1/N, and no sum functional ever exceeds the norm.
 */
inline Report verify_example_schreier(const SchreierHierarchy& h, const VerifyOptions& o) {
  const Ordinal family = o.xi.successor();
  const Rational c = o.c.value_or(Rational(1) - Rational(1, o.n));
  Report report("verify-example schreier", detail::options_json(o, c));
  const SeqSpec basis = SeqSpec::canonical_basis(NormSpec::schreier(family));

  const SmResult sm = sm_constant(h, family, basis, o.n, o.coeff_budget);
  report.results()["sm_constant"] = detail::sm_json(sm);
  report.check("sm_constant_equals_1", sm.estimate.value.compare(1) == 0,
               "the basis of X_{xi+1} is an l1^{xi+1} spreading model with constant exactly 1",
               Json{{"value", to_json(sm.estimate.value)}});

  std::vector<Functional> gamma;
  detail::largeness_check(report, h, family, basis, c, o.n, gamma);

  std::mt19937_64 rng(o.seed);
  detail::dual_sampling_check(report, h, gamma, o.n, o.samples, rng);
  return report;
}

/**
 * Unit vector basis under the star norm ||x||_* = max(||x+||, ||x-||):
 * ||e_2 - e_3||_* = 1, every admissible combination keeps half its l1 mass,
 * the constant 1/2 is attained at F = {2,3}, a = (1,-1), the basis is still
 * (xi+1, c)-large, and differences of Cesaro means stay within 1.
 */
inline Report verify_example_star(const SchreierHierarchy& h, const VerifyOptions& o) {
  const Ordinal family = o.xi.successor();
  const NormSpec star = NormSpec::schreier_star(family);
  const Rational c = o.c.value_or(Rational(1) - Rational(1, o.n));
  Report report("verify-example star", detail::options_json(o, c));
  const SeqSpec basis = SeqSpec::canonical_basis(star);

  const NormResult d = norm(h, star, RatVec::unit(2) - RatVec::unit(3));
  report.results()["norm_e2_minus_e3"] = to_json(d);
  report.check("star_norm_e2_minus_e3", d.value.compare(1) == 0, "||e_2 - e_3||_* = 1",
               Json{{"value", to_json(d.value)}});

  const SmResult sm = sm_constant(h, family, basis, o.n, o.coeff_budget);
  report.results()["sm_constant"] = detail::sm_json(sm);

  // random rational coefficients on random admissible sets, on top of the sign patterns
  std::mt19937_64 rng(o.seed);
  const auto members = h.enumerate(family, o.n);
  std::size_t below_half = 0;
  Json first_bad;
  if (members.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(1, members.size() - 1);  // skip the empty set
    for (std::size_t s = 0; s < o.samples; ++s) {
      const FinSet& f = members[pick(rng)];
      std::vector<RatVec::Entry> e;
      for (auto i : f) e.emplace_back(i, detail::random_coefficient(rng));
      const RatVec x(std::move(e));
      if (norm(h, star, x).value.compare(x.l1() / 2) < 0 && below_half++ == 0) first_bad = to_json(x);
    }
  }
  const bool half_ok = sm.estimate.value.compare(Rational(1, 2)) >= 0 && below_half == 0;
  Json half_details{{"min_ratio_sign_patterns", to_json(sm.estimate.value)},
                    {"combinations_tested", sm.combinations_tested},
                    {"random_samples", o.samples},
                    {"random_violations", below_half}};
  if (below_half) half_details["first_violation"] = first_bad;
  report.check("half_inequality", half_ok, "||sum_{F} a_i e_i||_* >= 1/2 sum |a_i| for F in S_{xi+1}",
               half_details);

  const bool witness_ok = sm.witness_set == FinSet{2, 3} && sm.witness_coeffs.size() == 2 &&
                          sm.witness_coeffs[0] == 1 && sm.witness_coeffs[1] == -1;
  report.check("sm_constant_equals_half", sm.estimate.value.compare(Rational(1, 2)) == 0 && witness_ok,
               "the star-renormed basis has spreading constant exactly 1/2, attained at F = {2,3}, a = (1,-1)",
               Json{{"value", to_json(sm.estimate.value)}, {"witness", detail::sm_json(sm)["witness"]}});

  std::vector<Functional> gamma;
  detail::largeness_check(report, h, family, basis, c, o.n, gamma);
  detail::dual_sampling_check(report, h, gamma, o.n, o.samples, rng);

  // ||u_k - u_l||_* <= 1 for the Cesaro means u_k of the basis
  const auto means = cesaro_means(basis.prefix(o.n));
  NormValue worst{0, false};
  std::pair<std::uint64_t, std::uint64_t> worst_pair{0, 0};
  std::size_t over = 0;
  for (std::uint64_t k = 1; k <= o.n; ++k) {
    for (std::uint64_t l = k + 1; l <= o.n; ++l) {
      const NormValue v = norm(h, star, means[k - 1] - means[l - 1]).value;
      if (v.compare(1) > 0) ++over;
      if (worst < v) {
        worst = v;
        worst_pair = {k, l};
      }
    }
  }
  report.check("cesaro_difference_cap", over == 0, "||u_k - u_l||_* <= 1 for Cesaro means of the basis",
               Json{{"max", to_json(worst)}, {"pair", {worst_pair.first, worst_pair.second}}, {"pairs_over", over}});
  return report;
}

/**
 * Tabulates the closed form for l = 1..l_max and checks the approach to 2c:
 * vanishing(l) <= 1/l, |main(l)/c - 2| <= 5/l, main(l)/c < 2, and both
 * columns monotone from l = 2 on.
 */
inline Report verify_prop_formula(std::uint64_t l_max, const Rational& c) {
  if (l_max == 0) throw std::invalid_argument("l_max must be at least 1");
  if (c <= 0) throw std::invalid_argument("c must be positive");
  Report report("verify-example prop", Json{{"l_max", l_max}, {"c", to_string(c)}});

  Json rows = Json::array();
  std::size_t vanishing_bad = 0, envelope_bad = 0, above_bad = 0, monotone_bad = 0;
  std::optional<PropFormula> previous;
  PropFormula last{};
  for (std::uint64_t l = 1; l <= l_max; ++l) {
    const PropFormula p = prop_formula(l, c);
    rows.push_back(Json{{"l", l}, {"vanishing", to_string(p.vanishing)}, {"main", to_string(p.main)}});
    const Rational ratio = p.main / c;
    if (l >= 2) {
      const Rational inv = Rational(1, l);
      if (p.vanishing > inv) ++vanishing_bad;
      if (abs(ratio - 2) > 5 * inv) ++envelope_bad;
      if (previous && (p.vanishing > previous->vanishing || p.main < previous->main)) ++monotone_bad;
      previous = p;
    }
    if (ratio >= 2) ++above_bad;
    last = p;
  }
  report.results()["limit_target"] = to_string(2 * c);
  report.results()["final"] = Json{{"l", l_max},
                                   {"vanishing", to_string(last.vanishing)},
                                   {"main", to_string(last.main)},
                                   {"main_approx", to_json(NormValue{last.main, false})["approx"]}};
  report.results()["rows"] = std::move(rows);

  report.check("vanishing_envelope", vanishing_bad == 0, "vanishing(l) <= 1/l for l >= 2",
               Json{{"violations", vanishing_bad}});
  report.check("main_envelope", envelope_bad == 0, "|main(l)/c - 2| <= 5/l for l >= 2",
               Json{{"violations", envelope_bad}});
  report.check("below_limit", above_bad == 0, "main(l) < 2c for every l", Json{{"violations", above_bad}});
  report.check("monotone_approach", monotone_bad == 0, "vanishing decreases and main increases from l = 2 on",
               Json{{"violations", monotone_bad}});
  return report;
}

}  // namespace schreier_lab
