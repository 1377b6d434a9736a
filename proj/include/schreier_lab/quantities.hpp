#pragma once

/**
 * @file quantities.hpp
 * @brief Finite-horizon estimators: ca / cca windows, cca after repeated
 *        averages, spreading-model constants, F_delta families, (xi,c)-largeness
 *        and the closed-form lower bound for Cesaro means along cubes.
 *
 * The underlying quantities are inf/sup over infinite index sets. Every
 * estimator here says which side of the true value it lands on.
 */

#include "averages.hpp"
#include "budget.hpp"
#include "finset.hpp"
#include "index_stream.hpp"
#include "ordinal.hpp"
#include "rat_vec.hpp"
#include "schreier.hpp"
#include "spaces.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace schreier_lab {

// ---------------------------------------------------------------------------
// Sequences

/**
 * A deterministic sequence (x_n)_{n>=1} of finitely supported vectors together
 * with the norm of the space it lives in.
 */
class SeqSpec {
 public:
  struct CanonicalBasis {};
  struct Subsequence {
    std::shared_ptr<const SeqSpec> base;
    IndexStream along;
  };
  struct Explicit {
    std::vector<RatVec> terms;  // x_1, x_2, ...; the sequence is undefined past the list
  };
  struct WeightedBasis {
    std::string name;
    std::function<Rational(std::uint64_t)> weight;  // x_n = weight(n) e_n
  };
  struct Constant {
    RatVec value;
  };
  struct Offset {
    std::shared_ptr<const SeqSpec> base;
    RatVec limit;  // x_n - limit
  };
  using Kind = std::variant<CanonicalBasis, Subsequence, Explicit, WeightedBasis, Constant, Offset>;

  SeqSpec(Kind kind, NormSpec ambient) : kind_(std::move(kind)), ambient_(std::move(ambient)) {}

  static SeqSpec canonical_basis(NormSpec ambient) { return {CanonicalBasis{}, std::move(ambient)}; }
  static SeqSpec explicit_terms(std::vector<RatVec> terms, NormSpec ambient) {
    return {Explicit{std::move(terms)}, std::move(ambient)};
  }
  static SeqSpec weighted_basis(std::string name, std::function<Rational(std::uint64_t)> w, NormSpec ambient) {
    return {WeightedBasis{std::move(name), std::move(w)}, std::move(ambient)};
  }
  static SeqSpec constant(RatVec v, NormSpec ambient) { return {Constant{std::move(v)}, std::move(ambient)}; }

  /// (x_{l_n})_n
  SeqSpec subsequence(const IndexStream& along) const {
    return {Subsequence{std::make_shared<const SeqSpec>(*this), along}, ambient_};
  }

  /// (x_n - x)_n, for a caller-supplied weak limit x.
  SeqSpec minus(const RatVec& limit) const {
    if (limit.is_zero()) return *this;
    return {Offset{std::make_shared<const SeqSpec>(*this), limit}, ambient_};
  }

  RatVec element(std::uint64_t n) const {
    if (n == 0) throw std::out_of_range("sequences are indexed from 1");
    return std::visit(
        [&](const auto& k) -> RatVec {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, CanonicalBasis>) {
            return RatVec::unit(n);
          } else if constexpr (std::is_same_v<T, Subsequence>) {
            return k.base->element(k.along.element(n));
          } else if constexpr (std::is_same_v<T, Explicit>) {
            if (n > k.terms.size())
              throw std::out_of_range("explicit sequence has only " + std::to_string(k.terms.size()) + " terms");
            return k.terms[n - 1];
          } else if constexpr (std::is_same_v<T, WeightedBasis>) {
            return RatVec::unit(n, k.weight(n));
          } else if constexpr (std::is_same_v<T, Constant>) {
            return k.value;
          } else {
            return k.base->element(n) - k.limit;
          }
        },
        kind_);
  }

  std::vector<RatVec> prefix(std::uint64_t count) const {
    std::vector<RatVec> out;
    out.reserve(count);
    for (std::uint64_t n = 1; n <= count; ++n) out.push_back(element(n));
    return out;
  }

  /// True when every term is the same vector, so Cauchy-type quantities vanish exactly.
  bool is_constant() const {
    if (std::holds_alternative<Constant>(kind_)) return true;
    if (auto s = std::get_if<Subsequence>(&kind_)) return s->base->is_constant();
    if (auto o = std::get_if<Offset>(&kind_)) return o->base->is_constant();
    return false;
  }

  std::string describe() const {
    return std::visit(
        [&](const auto& k) -> std::string {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, CanonicalBasis>) {
            return "basis";
          } else if constexpr (std::is_same_v<T, Subsequence>) {
            return k.base->describe() + "[" + k.along.name() + "]";
          } else if constexpr (std::is_same_v<T, Explicit>) {
            return "explicit(" + std::to_string(k.terms.size()) + ")";
          } else if constexpr (std::is_same_v<T, WeightedBasis>) {
            return "weighted(" + k.name + ")";
          } else if constexpr (std::is_same_v<T, Constant>) {
            return "constant" + k.value.to_string();
          } else {
            return k.base->describe() + "-" + k.limit.to_string();
          }
        },
        kind_);
  }

  const NormSpec& ambient() const { return ambient_; }
  const Kind& kind() const { return kind_; }

 private:
  Kind kind_;
  NormSpec ambient_;
};

// ---------------------------------------------------------------------------
// Estimates

enum class Direction { UpperBound, LowerBound, Exact, Unverified };

inline std::string to_string(Direction d) {
  switch (d) {
    case Direction::UpperBound: return "upper_bound";
    case Direction::LowerBound: return "lower_bound";
    case Direction::Exact: return "exact";
    case Direction::Unverified: return "unverified";
  }
  return "?";
}

/// A finite surrogate for an inf/sup over infinite index sets.
struct HorizonEstimate {
  NormValue value;
  Direction direction = Direction::Unverified;
  std::string horizon;  // the window and catalog the value was computed on
};

/// max over n0 <= k < l <= N of a norm, with the maximising pair.
struct WindowStat {
  NormValue value;
  std::uint64_t n0 = 0;
  std::uint64_t n = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> pair;
};

/// ca on the window [n0, N] of an explicit prefix xs[0..N-1].
inline WindowStat ca_window_of(const SchreierHierarchy& h, const NormSpec& ambient, std::span<const RatVec> xs,
                               std::uint64_t n0, std::uint64_t n) {
  if (n0 == 0 || n0 > n) throw std::invalid_argument("window needs 1 <= n0 <= N");
  if (xs.size() < n) throw std::out_of_range("window exceeds the supplied prefix");
  WindowStat w;
  w.n0 = n0;
  w.n = n;
  w.value = norm(h, ambient, RatVec{}).value;
  for (std::uint64_t k = n0; k <= n; ++k) {
    for (std::uint64_t l = k + 1; l <= n; ++l) {
      const NormValue v = norm(h, ambient, xs[k - 1] - xs[l - 1]).value;
      if (!w.pair || w.value < v) {
        w.pair = std::make_pair(k, l);
        w.value = v;
      }
    }
  }
  return w;
}

/// max_{n0 <= k < l <= N} ||x_k - x_l||
inline WindowStat ca_window(const SchreierHierarchy& h, const SeqSpec& xs, std::uint64_t n0, std::uint64_t n) {
  const auto terms = xs.prefix(n);
  return ca_window_of(h, xs.ambient(), terms, n0, n);
}

/// ca_window of the exact Cesaro means.
inline WindowStat cca_window(const SchreierHierarchy& h, const SeqSpec& xs, std::uint64_t n0, std::uint64_t n) {
  const auto terms = xs.prefix(n);
  const auto means = cesaro_means(terms);
  return ca_window_of(h, xs.ambient(), means, n0, n);
}

/// The first `count` terms of (xi_n^M . x)_n.
inline std::vector<RatVec> averaged_prefix(RepeatedAverages& engine, const Ordinal& xi, const IndexStream& m,
                                           const SeqSpec& xs, std::uint64_t count) {
  std::vector<RatVec> out;
  out.reserve(count);
  for (std::uint64_t n = 1; n <= count; ++n)
    out.push_back(weighted_sum(engine.element(xi, m, n).vec(), [&](std::uint64_t k) { return xs.element(k); }));
  return out;
}

/// cca of (xi_n^M . x)_n on the window [n0, N].
inline WindowStat cca_xi_window(const SchreierHierarchy& h, RepeatedAverages& engine, const Ordinal& xi,
                                const IndexStream& m, const SeqSpec& xs, std::uint64_t n0, std::uint64_t n) {
  const auto transformed = averaged_prefix(engine, xi, m, xs, n);
  const auto means = cesaro_means(transformed);
  return ca_window_of(h, xs.ambient(), means, n0, n);
}

inline std::string window_label(std::uint64_t n0, std::uint64_t n) {
  return "[" + std::to_string(n0) + "," + std::to_string(n) + "]";
}

inline std::string catalog_label(std::span<const IndexStream> catalog) {
  std::string s = "{";
  for (const auto& m : catalog) s += (s.size() > 1 ? "," : "") + m.name();
  return s + "}";
}

/// min over a catalog of streams: an upper bound for the infimum over all M.
inline HorizonEstimate cca_xi_tilde(const SchreierHierarchy& h, RepeatedAverages& engine, const Ordinal& xi,
                                    const SeqSpec& xs, std::span<const IndexStream> catalog, std::uint64_t n0,
                                    std::uint64_t n) {
  if (catalog.empty()) throw std::invalid_argument("stream catalog is empty");
  HorizonEstimate e;
  bool first = true;
  for (const auto& m : catalog) {
    const NormValue v = cca_xi_window(h, engine, xi, m, xs, n0, n).value;
    if (first || v < e.value) e.value = v;
    first = false;
  }
  e.direction = xs.is_constant() ? Direction::Exact : Direction::UpperBound;
  e.horizon = "window " + window_label(n0, n) + " catalog " + catalog_label(catalog);
  return e;
}

/// Refinements of M tried by the sup-inf estimator.
using RefinementRule = std::function<std::vector<IndexStream>(const IndexStream&)>;

/// M, M without its first term, and M along the even positions.
inline std::vector<IndexStream> default_refinements(const IndexStream& m) {
  return {m, m.drop(1), m.compose(IndexStream::evens())};
}

/**
 * max over the catalog of the min over generated refinements. Neither side of
 * the true sup-inf is guaranteed, so the estimate is tagged Unverified.
 */
inline HorizonEstimate cca_xi_tilde_sup(const SchreierHierarchy& h, RepeatedAverages& engine, const Ordinal& xi,
                                        const SeqSpec& xs, std::span<const IndexStream> catalog,
                                        const RefinementRule& refine, std::uint64_t n0, std::uint64_t n) {
  if (catalog.empty()) throw std::invalid_argument("stream catalog is empty");
  HorizonEstimate e;
  bool first_outer = true;
  for (const auto& m : catalog) {
    const auto refinements = refine(m);
    if (refinements.empty()) throw std::invalid_argument("refinement rule produced no streams");
    NormValue inner;
    bool first_inner = true;
    for (const auto& r : refinements) {
      const NormValue v = cca_xi_window(h, engine, xi, r, xs, n0, n).value;
      if (first_inner || v < inner) inner = v;
      first_inner = false;
    }
    if (first_outer || e.value < inner) e.value = inner;
    first_outer = false;
  }
  e.direction = xs.is_constant() ? Direction::Exact : Direction::Unverified;
  e.horizon = "window " + window_label(n0, n) + " catalog " + catalog_label(catalog);
  return e;
}

// ---------------------------------------------------------------------------
// Spreading-model constants

struct SmResult {
  HorizonEstimate estimate;
  FinSet witness_set;                    // (F, a) attaining the minimum ratio
  std::vector<Rational> witness_coeffs;
  std::uint64_t sets_tested = 0;
  std::uint64_t combinations_tested = 0;
};

/**
 * min of ||sum_{i in F} a_i x_i|| / sum |a_i| over non-empty F in S_xi inside
 * {1..N} and a in {uniform positive} u {all sign patterns, if |F| <= coeff_budget}.
 * Any valid spreading constant is at most this minimum (UpperBound).
 */
inline SmResult sm_constant(const SchreierHierarchy& h, const Ordinal& xi, const SeqSpec& xs, std::uint64_t n,
                            std::size_t coeff_budget) {
  SmResult r;
  bool first = true;
  std::vector<RatVec> terms = xs.prefix(n);
  auto consider = [&](const FinSet& f, std::vector<Rational> a) {
    std::vector<RatVec::Entry> acc;
    Rational mass = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (const auto& [j, v] : terms[f[i] - 1].entries()) acc.emplace_back(j, a[i] * v);
      mass += abs(a[i]);
    }
    const NormValue ratio = norm(h, xs.ambient(), RatVec(std::move(acc))).value.divided_by(mass);
    ++r.combinations_tested;
    if (first || ratio < r.estimate.value) {
      r.estimate.value = ratio;
      r.witness_set = f;
      r.witness_coeffs = std::move(a);
      first = false;
    }
  };
  h.for_each_member(xi, n, [&](const FinSet& f) {
    if (f.empty()) return true;
    ++r.sets_tested;
    const std::size_t k = f.size();
    consider(f, std::vector<Rational>(k, Rational(1)));
    if (k <= coeff_budget) {
      // sign patterns in order: the last coordinates flip first
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
        std::vector<Rational> a(k, Rational(1));
        for (std::size_t i = 0; i < k; ++i)
          if (mask >> (k - 1 - i) & 1U) a[i] = -1;
        consider(f, std::move(a));
      }
    }
    return true;
  });
  r.estimate.direction = Direction::UpperBound;
  r.estimate.horizon = "S_" + xi.to_string() + " within {1.." + std::to_string(n) + "}, sign patterns up to |F| <= " +
                       std::to_string(coeff_budget);
  return r;
}

// ---------------------------------------------------------------------------
// F_delta families and largeness

/**
 * A hereditary family given by generators: F belongs iff F is a subset of
 * some generator. Membership is answered from the closure under subsets,
 * built once on demand.
 */
class HereditaryFamily {
 public:
  HereditaryFamily(std::uint64_t universe, std::vector<FinSet> generators, std::size_t max_size)
      : universe_(universe), max_size_(max_size) {
    if (universe > 63) throw BudgetExceeded("hereditary families are limited to subsets of {1..63}");
    for (auto& g : generators) add_generator(std::move(g));
  }

  std::uint64_t universe() const { return universe_; }
  const std::vector<FinSet>& generators() const { return generators_; }

  bool contains(const FinSet& f) const {
    if (f.empty()) return true;
    if (f.max() > universe_) return false;
    return closure_.contains(mask_of(f));
  }

  std::size_t size() const { return closure_.size(); }

  /// All members in lexicographic order.
  std::vector<FinSet> members() const {
    std::vector<FinSet> out;
    out.reserve(closure_.size());
    for (auto mask : closure_) out.push_back(set_of(mask));
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static std::uint64_t mask_of(const FinSet& f) {
    std::uint64_t m = 0;
    for (auto x : f) m |= std::uint64_t{1} << (x - 1);
    return m;
  }
  static FinSet set_of(std::uint64_t mask) {
    std::vector<std::uint64_t> v;
    for (std::uint64_t i = 0; i < 64; ++i)
      if (mask >> i & 1U) v.push_back(i + 1);
    return FinSet(std::move(v));
  }

  void add_generator(FinSet g) {
    if (!g.empty() && g.max() > universe_) throw std::invalid_argument("generator leaves the universe");
    const std::uint64_t mask = mask_of(g);
    if (closure_.contains(mask)) return;
    generators_.push_back(std::move(g));
    // removing one element at a time reaches every subset; stop at subsets already present
    std::vector<std::uint64_t> stack{mask};
    closure_.insert(mask);
    while (!stack.empty()) {
      const std::uint64_t cur = stack.back();
      stack.pop_back();
      for (std::uint64_t rest = cur; rest != 0; rest &= rest - 1) {
        const std::uint64_t sub = cur & ~(rest & -rest);
        if (closure_.insert(sub).second) {
          if (closure_.size() > max_size_)
            throw BudgetExceeded("hereditary family exceeds " + std::to_string(max_size_) + " members");
          stack.push_back(sub);
        }
      }
    }
  }

  std::uint64_t universe_;
  std::size_t max_size_;
  std::vector<FinSet> generators_;
  std::unordered_set<std::uint64_t> closure_;
};

struct FDeltaResult {
  HereditaryFamily family;
  std::uint64_t certified_evaluations = 0;  // |f(x_n)| <= ||x_n|| checks performed
};

/**
 * The family of F inside {1..N} on which some supplied functional is >= delta
 * at every x_n, n in F. Each functional must be certified for the ambient norm
 * and every evaluation is checked against it.
 */
inline FDeltaResult f_delta(const SchreierHierarchy& h, std::span<const Functional> functionals, const SeqSpec& xs,
                            const Rational& delta, std::uint64_t n) {
  for (const auto& f : functionals)
    if (!f.certified_for(xs.ambient()))
      throw UncertifiedFunctional("functional " + f.entries().to_string() + " is not certified for " +
                                  xs.ambient().to_string());
  std::vector<RatVec> terms = xs.prefix(n);
  std::vector<NormValue> norms;
  norms.reserve(n);
  for (const auto& x : terms) norms.push_back(norm(h, xs.ambient(), x).value);

  std::vector<FinSet> generators;
  std::uint64_t evaluations = 0;
  for (const auto& f : functionals) {
    FinSet g;
    for (std::uint64_t k = 1; k <= n; ++k) {
      const Rational v = f.evaluate(terms[k - 1]);
      ++evaluations;
      if (norms[k - 1].compare(abs(v)) < 0)
        throw std::logic_error("certified functional exceeds the norm of x_" + std::to_string(k));
      if (v >= delta) g.push_back(k);
    }
    generators.push_back(std::move(g));
  }
  return {HereditaryFamily(n, std::move(generators), h.budget().max_family_size), evaluations};
}

/// Sum functionals e*_F for every F in S_xi inside {1..N}, certified for `spec`.
inline std::vector<Functional> sum_functionals(const SchreierHierarchy& h, const Ordinal& xi, std::uint64_t n,
                                               const NormSpec& spec) {
  std::vector<Functional> out;
  h.for_each_member(xi, n, [&](const FinSet& f) {
    if (!f.empty()) out.push_back(coordinate_sum_functional(h, f, spec));
    return true;
  });
  return out;
}

struct LargeCheck {
  bool holds = true;
  std::optional<FinSet> failing;        // first F in S_xi^M (lexicographic in the preimage) outside F_c
  std::uint64_t sets_checked = 0;
  std::uint64_t family_size = 0;
  std::uint64_t certified_evaluations = 0;
};

/**
 * Every F in S_xi^M inside {1..N} lies in F_c((x_n - x)_n) relative to the
 * supplied functionals. Window-certified only.
 */
inline LargeCheck large_check(const SchreierHierarchy& h, const Ordinal& xi, const Rational& c, const SeqSpec& xs,
                              const IndexStream& m, std::span<const Functional> functionals, std::uint64_t n,
                              const RatVec& weak_limit = {}) {
  const auto fam = f_delta(h, functionals, xs.minus(weak_limit), c, n);
  LargeCheck r;
  r.family_size = fam.family.size();
  r.certified_evaluations = fam.certified_evaluations;
  std::uint64_t positions = 0;
  while (m.element(positions + 1) <= n) ++positions;
  h.for_each_member(xi, positions, [&](const FinSet& g) {
    std::vector<std::uint64_t> image;
    image.reserve(g.size());
    for (auto p : g) image.push_back(m.element(p));
    FinSet f(std::move(image));
    ++r.sets_checked;
    if (!fam.family.contains(f)) {
      r.holds = false;
      r.failing = std::move(f);
      return false;
    }
    return true;
  });
  return r;
}

// ---------------------------------------------------------------------------
// Closed form

struct PropFormula {
  Rational vanishing;
  Rational main;
};

/**
 * vanishing = (l^3 - l^2) / ((l^2 + l)(l^3 + l))
 * main      = c ((l^3 - l^2) l^2 / ((l^2 + l)(l^3 + l)) + (l^3 - l^2) / (l^3 + l))
 */
inline PropFormula prop_formula(std::uint64_t l, const Rational& c) {
  if (l == 0) throw std::invalid_argument("prop_formula needs l >= 1");
  const Rational x(l);
  const Rational l2 = x * x, l3 = l2 * x;
  const Rational top = l3 - l2;
  const Rational denom = (l2 + x) * (l3 + x);
  return {top / denom, c * (top * l2 / denom + top / (l3 + x))};
}

}  // namespace schreier_lab
