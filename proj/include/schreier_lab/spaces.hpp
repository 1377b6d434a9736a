#pragma once

/**
 * @file spaces.hpp
 * @brief Exact norms of the Schreier space X_xi, its star renorming, the
 *        Schreier-Baernstein space X_xi^2, and the coordinate-sum functionals.
 *
 *   ||x||        = max over F in S_xi of sum_{i in F} |x_i|
 *   ||x||_*      = max(||x+||, ||x-||)
 *   ||x||_{X^2}  = sup over chains F_1 < ... < F_n in S_xi of (sum_j (sum_{i in F_j} |x_i|)^2)^(1/2)
 */

#include "budget.hpp"
#include "finset.hpp"
#include "ordinal.hpp"
#include "rat_vec.hpp"
#include "schreier.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schreier_lab {

enum class NormKind { L1, L2, Sup, Schreier, SchreierStar, Baernstein2 };

struct NormSpec {
  NormKind kind = NormKind::L1;
  Ordinal xi;  // family index; ignored by L1, L2 and Sup

  static NormSpec l1() { return {NormKind::L1, {}}; }
  static NormSpec l2() { return {NormKind::L2, {}}; }
  static NormSpec sup() { return {NormKind::Sup, {}}; }
  static NormSpec schreier(Ordinal xi) { return {NormKind::Schreier, std::move(xi)}; }
  static NormSpec schreier_star(Ordinal xi) { return {NormKind::SchreierStar, std::move(xi)}; }
  static NormSpec baernstein2(Ordinal xi) { return {NormKind::Baernstein2, std::move(xi)}; }

  bool uses_family() const {
    return kind == NormKind::Schreier || kind == NormKind::SchreierStar || kind == NormKind::Baernstein2;
  }

  /// Space names used on the command line: l1, l2, sup, schreier, star, baernstein2.
  static NormSpec parse(std::string_view space, const Ordinal& xi = {}) {
    if (space == "l1") return l1();
    if (space == "l2") return l2();
    if (space == "sup") return sup();
    if (space == "schreier") return schreier(xi);
    if (space == "star") return schreier_star(xi);
    if (space == "baernstein2") return baernstein2(xi);
    throw std::invalid_argument("unknown space '" + std::string(space) +
                                "' (expected l1|l2|sup|schreier|star|baernstein2)");
  }

  std::string space_name() const {
    switch (kind) {
      case NormKind::L1: return "l1";
      case NormKind::L2: return "l2";
      case NormKind::Sup: return "sup";
      case NormKind::Schreier: return "schreier";
      case NormKind::SchreierStar: return "star";
      case NormKind::Baernstein2: return "baernstein2";
    }
    return "?";
  }

  std::string to_string() const {
    return uses_family() ? space_name() + "(" + xi.to_string() + ")" : space_name();
  }

  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

/**
 * A norm value held exactly. For l2 and Baernstein2 the exact quantity is the
 * square of the norm (`squared` set); comparisons stay exact either way.
 */
struct NormValue {
  Rational exact = 0;
  bool squared = false;

  double approx() const { return squared ? std::sqrt(to_double(exact)) : to_double(exact); }

  /// Divide the norm by a positive rational.
  NormValue divided_by(const Rational& q) const { return {squared ? exact / (q * q) : exact / q, squared}; }

  /// Compare the norm with a plain rational r >= 0.
  int compare(const Rational& r) const {
    const Rational rhs = squared ? r * r : r;
    return exact < rhs ? -1 : (exact > rhs ? 1 : 0);
  }

  std::string to_string() const { return squared ? "sqrt(" + schreier_lab::to_string(exact) + ")" : schreier_lab::to_string(exact); }

  friend bool operator==(const NormValue&, const NormValue&) = default;
  friend bool operator<(const NormValue& a, const NormValue& b) {
    if (a.squared != b.squared) throw std::logic_error("comparing squared and plain norm values");
    return a.exact < b.exact;
  }
};

struct NormResult {
  NormValue value;
  /// Maximising set (Schreier, star) or chain (Baernstein2); empty for l1/l2/sup.
  std::vector<FinSet> witness;
  /// For the star norm: which part attains the maximum ("+" or "-").
  std::string part;
};

namespace detail {

struct WeightedSupport {
  std::vector<std::uint64_t> index;
  std::vector<Rational> weight;  // |x_i| > 0
};

inline WeightedSupport weighted_support(const RatVec& x) {
  WeightedSupport ws;
  for (const auto& [i, v] : x.entries()) {
    ws.index.push_back(i);
    ws.weight.push_back(abs(v));
  }
  return ws;
}

/**
 * Branch and bound for max over F in S_xi, F inside supp, of the mass of F.
 * Sets are explored in lexicographic order and only a strictly larger mass
 * replaces the incumbent, so the reported maximiser is the lexicographically
 * smallest one. A subtree is cut when its remaining mass cannot beat the
 * incumbent, and at the first non-member (hereditary).
 */
inline std::pair<Rational, FinSet> schreier_bnb(const SchreierHierarchy& h, const Ordinal& xi,
                                                const WeightedSupport& ws, std::size_t lo, std::size_t hi) {
  std::vector<Rational> suffix(hi - lo + 1);
  for (std::size_t p = hi; p-- > lo;) suffix[p - lo] = suffix[p - lo + 1] + ws.weight[p];

  Rational best = 0;
  FinSet best_set;
  FinSet current;
  auto dfs = [&](auto&& self, std::size_t start, const Rational& mass) -> void {
    for (std::size_t p = start; p < hi; ++p) {
      if (mass + suffix[p - lo] <= best) return;
      current.push_back(ws.index[p]);
      if (h.is_member(xi, current)) {
        const Rational m2 = mass + ws.weight[p];
        if (m2 > best) {
          best = m2;
          best_set = current;
        }
        self(self, p + 1, m2);
      }
      current.pop_back();
    }
  };
  dfs(dfs, lo, Rational(0));
  return {best, best_set};
}

inline NormResult schreier_norm(const SchreierHierarchy& h, const Ordinal& xi, const RatVec& x) {
  const auto ws = weighted_support(x);
  auto [value, set] = schreier_bnb(h, xi, ws, 0, ws.index.size());
  NormResult r;
  r.value = {value, false};
  r.witness.push_back(std::move(set));
  return r;
}

/**
 * Baernstein norm by dynamic programming over the first block: the best chain
 * on positions >= p either skips p or starts with the heaviest S_xi set inside
 * positions [p, q] followed by the best chain after q.
 */
inline NormResult baernstein_norm(const SchreierHierarchy& h, const Ordinal& xi, const RatVec& x) {
  const auto ws = weighted_support(x);
  const std::size_t k = ws.index.size();
  std::vector<Rational> dp(k + 1);
  std::vector<std::optional<std::pair<std::size_t, FinSet>>> choice(k + 1);
  for (std::size_t p = k; p-- > 0;) {
    dp[p] = dp[p + 1];
    for (std::size_t q = p; q < k; ++q) {
      auto [mass, set] = schreier_bnb(h, xi, ws, p, q + 1);
      const Rational candidate = mass * mass + dp[q + 1];
      if (candidate > dp[p]) {
        dp[p] = candidate;
        choice[p] = std::make_pair(q + 1, std::move(set));
      }
    }
  }
  NormResult r;
  r.value = {dp[0], true};
  for (std::size_t p = 0; p < k;) {
    if (!choice[p]) {
      ++p;
      continue;
    }
    r.witness.push_back(choice[p]->second);
    p = choice[p]->first;
  }
  return r;
}

inline void check_support_budget(const RatVec& x, std::size_t limit, const char* what) {
  if (x.support_size() > limit)
    throw BudgetExceeded(std::string(what) + " limited to |supp x| <= " + std::to_string(limit) + ", got " +
                         std::to_string(x.support_size()));
}

}  // namespace detail

/// Exact norm with a maximising witness.
inline NormResult norm(const SchreierHierarchy& h, const NormSpec& spec, const RatVec& x) {
  NormResult r;
  switch (spec.kind) {
    case NormKind::L1:
      r.value = {x.l1(), false};
      return r;
    case NormKind::L2: {
      Rational s = 0;
      for (const auto& e : x.entries()) s += e.second * e.second;
      r.value = {s, true};
      return r;
    }
    case NormKind::Sup: {
      Rational m = 0;
      for (const auto& e : x.entries()) m = std::max(m, abs(e.second));
      r.value = {m, false};
      return r;
    }
    case NormKind::Schreier:
      detail::check_support_budget(x, h.budget().schreier_norm_support, "Schreier norm");
      return detail::schreier_norm(h, spec.xi, x);
    case NormKind::SchreierStar: {
      detail::check_support_budget(x, h.budget().schreier_norm_support, "star norm");
      auto plus = detail::schreier_norm(h, spec.xi, x.positive_part());
      auto minus = detail::schreier_norm(h, spec.xi, x.negative_part());
      if (minus.value.exact > plus.value.exact) {
        minus.part = "-";
        return minus;
      }
      plus.part = "+";
      return plus;
    }
    case NormKind::Baernstein2:
      detail::check_support_budget(x, h.budget().baernstein_norm_support, "Schreier-Baernstein norm");
      return detail::baernstein_norm(h, spec.xi, x);
  }
  throw std::logic_error("unhandled norm kind");
}

/**
 * Exhaustive evaluation used to certify norm(): every subset of supp x (every
 * chain, for Baernstein2) is scored, with membership decided by the
 * exhaustive oracle. No pruning.
 */
inline NormResult norm_oracle(const SchreierHierarchy& h, const NormSpec& spec, const RatVec& x) {
  if (!spec.uses_family()) return norm(h, spec, x);
  detail::check_support_budget(x, h.budget().oracle_norm_support, "norm oracle");

  auto subset_table = [&](const RatVec& v) {
    const auto ws = detail::weighted_support(v);
    const std::size_t k = ws.index.size();
    const FinSet supp(ws.index);
    std::vector<bool> member(std::size_t{1} << k);
    std::vector<Rational> mass(std::size_t{1} << k);
    for (std::uint64_t mask = 0; mask < member.size(); ++mask) {
      member[mask] = h.is_member_oracle(spec.xi, supp.select(mask));
      for (std::size_t i = 0; i < k; ++i)
        if (mask >> i & 1U) mass[mask] += ws.weight[i];
    }
    return std::make_tuple(supp, member, mass);
  };

  auto plain = [&](const RatVec& v) {
    auto [supp, member, mass] = subset_table(v);
    NormResult r;
    r.value = {0, false};
    FinSet best;
    for (std::uint64_t mask = 0; mask < member.size(); ++mask) {
      if (!member[mask]) continue;
      const FinSet f = supp.select(mask);
      if (mass[mask] > r.value.exact || (mass[mask] == r.value.exact && f < best)) {
        r.value.exact = mass[mask];
        best = f;
      }
    }
    r.witness.push_back(best);
    return r;
  };

  switch (spec.kind) {
    case NormKind::Schreier:
      return plain(x);
    case NormKind::SchreierStar: {
      auto plus = plain(x.positive_part());
      auto minus = plain(x.negative_part());
      if (minus.value.exact > plus.value.exact) {
        minus.part = "-";
        return minus;
      }
      plus.part = "+";
      return plus;
    }
    case NormKind::Baernstein2: {
      auto [supp, member, mass] = subset_table(x);
      const std::size_t k = supp.size();
      // every chain B_1 < B_2 < ... of non-empty member subsets, scored from scratch
      std::vector<std::uint64_t> chain;
      Rational best = 0;
      std::vector<std::uint64_t> best_chain;
      auto rec = [&](auto&& self, std::size_t start, const Rational& acc) -> void {
        if (acc > best) {
          best = acc;
          best_chain = chain;
        }
        if (start >= k) return;
        const std::uint64_t top = std::uint64_t{1} << k;
        for (std::uint64_t mask = std::uint64_t{1} << start; mask < top; ++mask) {
          if ((mask & ((std::uint64_t{1} << start) - 1)) != 0 || !member[mask]) continue;
          const std::size_t highest = 63 - static_cast<std::size_t>(__builtin_clzll(mask));
          chain.push_back(mask);
          self(self, highest + 1, acc + mass[mask] * mass[mask]);
          chain.pop_back();
        }
      };
      rec(rec, 0, Rational(0));
      NormResult r;
      r.value = {best, true};
      for (auto m : best_chain) r.witness.push_back(supp.select(m));
      return r;
    }
    default:
      break;
  }
  throw std::logic_error("unhandled norm kind");
}

// ---------------------------------------------------------------------------
// Functionals

class CertificationRefused : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UncertifiedFunctional : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * A finitely supported functional x -> sum_i f_i x_i. A certified functional
 * records the norm whose dual unit ball it is known to lie in.
 */
class Functional {
 public:
  explicit Functional(RatVec entries, std::optional<NormSpec> certified_ball_of = std::nullopt)
      : entries_(std::move(entries)), certified_(std::move(certified_ball_of)) {}

  Rational evaluate(const RatVec& x) const {
    Rational s = 0;
    auto a = entries_.entries().begin();
    auto b = x.entries().begin();
    while (a != entries_.entries().end() && b != x.entries().end()) {
      if (a->first < b->first)
        ++a;
      else if (b->first < a->first)
        ++b;
      else {
        s += a->second * b->second;
        ++a;
        ++b;
      }
    }
    return s;
  }

  /**
   * f(x) for a functional used as a member of the dual unit ball; checks
   * |f(x)| <= ||x|| and throws std::logic_error if the certificate is violated.
   */
  Rational evaluate_in_ball(const SchreierHierarchy& h, const RatVec& x) const {
    if (!certified_) throw UncertifiedFunctional("functional is not certified for any dual ball");
    const Rational v = evaluate(x);
    if (norm(h, *certified_, x).value.compare(abs(v)) < 0)
      throw std::logic_error("certified functional exceeds the norm of " + certified_->to_string() + " at " +
                             x.to_string());
    return v;
  }

  const RatVec& entries() const { return entries_; }
  const std::optional<NormSpec>& certified_ball_of() const { return certified_; }
  bool certified_for(const NormSpec& spec) const { return certified_ && *certified_ == spec; }

 private:
  RatVec entries_;
  std::optional<NormSpec> certified_;
};

/**
 * x* = sum_{j in F} e*_j, certified for the unit ball of X_xi^* (Schreier or
 * star norm of order xi). Refused unless F is in S_xi.
 */
inline Functional coordinate_sum_functional(const SchreierHierarchy& h, const FinSet& f, const NormSpec& spec) {
  if (spec.kind != NormKind::Schreier && spec.kind != NormKind::SchreierStar)
    throw CertificationRefused("coordinate-sum functionals are certified only for Schreier and star norms");
  if (!h.is_member(spec.xi, f))
    throw CertificationRefused("{" + f.to_string() + "} is not in S_" + spec.xi.to_string());
  return Functional(RatVec::indicator(f), spec);
}

}  // namespace schreier_lab
