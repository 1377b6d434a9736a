#pragma once

/**
 * @file averages.hpp
 * @brief Summability methods, the Repeated Averages xi_n^M, and non-increasing
 *        block convex combinations (NIBCC) with their Cesaro reweighting.
 *
 * Everything is exact. The objects are infinite; every entry point takes an
 * explicit index or prefix length and the invariants are checked on prefixes.
 */

#include "budget.hpp"
#include "index_stream.hpp"
#include "ordinal.hpp"
#include "rat_vec.hpp"
#include "schreier.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schreier_lab {

/// Finitely supported probability vector: positive entries summing to exactly 1.
class ProbVector {
 public:
  explicit ProbVector(RatVec v) : vec_(std::move(v)) {
    if (vec_.is_zero()) throw std::invalid_argument("probability vector with empty support");
    Rational total = 0;
    for (const auto& [i, w] : vec_.entries()) {
      if (w <= 0) throw std::invalid_argument("probability vector with non-positive entry at " + std::to_string(i));
      total += w;
    }
    if (total != 1) throw std::invalid_argument("probability vector sums to " + to_string(total) + ", not 1");
  }

  const RatVec& vec() const { return vec_; }
  FinSet support() const { return vec_.support(); }
  std::size_t support_size() const { return vec_.support_size(); }
  std::uint64_t min_index() const { return vec_.min_index(); }
  std::uint64_t max_index() const { return vec_.max_index(); }
  Rational operator[](std::uint64_t i) const { return vec_[i]; }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  RatVec vec_;
};

/**
 * Generator of the Repeated Averages (xi_n^M)_n for every ordinal xi and
 * stream M, with all produced vectors memoised per (xi, M).
 *
 *  - xi = 0:      xi_n^M = e_{m_n}
 *  - xi = z + 1:  k_1 = 0, s_n = min supp z^M_{k_n + 1},
 *                 xi_n^M = (1/s_n) * sum_{i = k_n+1}^{k_n+s_n} z_i^M,  k_{n+1} = k_n + s_n
 *  - xi limit:    M_1 = M, n_j = min M_j, xi_j^M = [xi_{n_j}]_1^{M_j},
 *                 M_{j+1} = M_j minus supp xi_j^M
 *
 * Supports grow like iterated exponentials in xi, so almost every (xi, n)
 * beyond the first few is out of reach; the engine throws BudgetExceeded
 * before allocating anything larger than Budget::max_support.
 *
 * Not thread-safe: one engine per thread.
 */
class RepeatedAverages {
 public:
  explicit RepeatedAverages(FundamentalSequence rule = default_fundamental_sequence, Budget budget = {})
      : rule_(std::move(rule)), budget_(budget) {}

  explicit RepeatedAverages(const SchreierHierarchy& h) : RepeatedAverages(h.rule(), h.budget()) {}

  /// xi_n^M, n >= 1.
  const ProbVector& element(const Ordinal& xi, const IndexStream& m, std::uint64_t n) {
    if (n == 0) throw std::out_of_range("summability methods are indexed from 1");
    State& st = state(xi, m);
    while (st.vectors.size() < n) extend(st);
    return st.vectors[n - 1];
  }

  /**
   * Block boundaries k_1 = 0 < k_2 < ... < k_{count+1} of a successor method
   * over its predecessor, for the first `count` vectors.
   */
  std::vector<std::uint64_t> block_starts(const Ordinal& successor_xi, const IndexStream& m, std::uint64_t count) {
    if (successor_xi.kind() != OrdinalKind::Successor)
      throw std::invalid_argument("block_starts needs a successor ordinal");
    element(successor_xi, m, count);
    const State& st = state(successor_xi, m);
    return {st.cursors.begin(), st.cursors.begin() + static_cast<std::ptrdiff_t>(count + 1)};
  }

  std::size_t entries_materialised() const { return total_entries_; }
  const Budget& budget() const { return budget_; }

 private:
  struct State {
    Ordinal xi;
    IndexStream stream;
    std::deque<ProbVector> vectors;
    // successor: k_1, k_2, ...; limit: number of elements of M consumed before each vector
    std::vector<std::uint64_t> cursors{0};
  };

  using Key = std::pair<Ordinal, std::pair<const void*, std::uint64_t>>;

  State& state(const Ordinal& xi, const IndexStream& m) {
    Key key{xi, m.key()};
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, std::make_unique<State>(State{xi, m, {}, {0}})).first;
    return *it->second;
  }

  void account(std::size_t entries) {
    if (entries > budget_.max_support)
      throw BudgetExceeded("repeated-average support of " + std::to_string(entries) + " entries exceeds max_support=" +
                           std::to_string(budget_.max_support));
    total_entries_ += entries;
    if (total_entries_ > budget_.max_total_entries)
      throw BudgetExceeded("repeated averages materialised more than max_total_entries=" +
                           std::to_string(budget_.max_total_entries) + " entries");
  }

  void extend(State& st) {
    switch (st.xi.kind()) {
      case OrdinalKind::Zero: {
        const auto n = st.vectors.size() + 1;
        account(1);
        st.vectors.emplace_back(RatVec::unit(st.stream.element(n)));
        st.cursors.push_back(n);
        return;
      }
      case OrdinalKind::Successor: {
        const Ordinal z = st.xi.predecessor();
        const IndexStream m = st.stream;
        const std::uint64_t k = st.cursors.back();
        const std::uint64_t s = element(z, m, k + 1).min_index();
        if (s > budget_.max_support)
          throw BudgetExceeded("[" + st.xi.to_string() + "]_" + std::to_string(st.vectors.size() + 1) + "^" +
                               m.name() + " averages " + std::to_string(s) +
                               " vectors, beyond max_support=" + std::to_string(budget_.max_support));
        const Rational weight(1, s);
        std::vector<RatVec::Entry> entries;
        for (std::uint64_t i = k + 1; i <= k + s; ++i) {
          const ProbVector& piece = element(z, m, i);
          if (entries.size() + piece.support_size() > budget_.max_support)
            throw BudgetExceeded("[" + st.xi.to_string() + "]_" + std::to_string(st.vectors.size() + 1) + "^" +
                                 m.name() + " exceeds max_support=" + std::to_string(budget_.max_support));
          for (const auto& [idx, w] : piece.vec().entries()) entries.emplace_back(idx, w * weight);
        }
        account(entries.size());
        // pieces have increasing disjoint supports, so the concatenation is sorted
        st.vectors.emplace_back(RatVec::from_sorted(std::move(entries)));
        st.cursors.push_back(k + s);
        return;
      }
      case OrdinalKind::Limit: {
        const std::uint64_t consumed = st.cursors.back();
        const IndexStream mj = st.stream.drop(consumed);
        const Ordinal step = fundamental_successor_seq(st.xi, mj.min(), rule_);
        ProbVector v = element(step, mj, 1);
        const auto size = v.support_size();
        account(size);
        st.vectors.push_back(std::move(v));
        st.cursors.push_back(consumed + size);
        return;
      }
    }
  }

  FundamentalSequence rule_;
  Budget budget_;
  std::map<Key, std::unique_ptr<State>> cache_;
  std::size_t total_entries_ = 0;
};

/**
 * An M-summability method (A_n): probability vectors with supp A_n < supp A_{n+1}
 * whose supports tile M.
 */
class SummabilityMethod {
 public:
  using Generator = std::function<ProbVector(std::uint64_t)>;

  SummabilityMethod(std::string name, IndexStream m, Generator g)
      : name_(std::move(name)), stream_(std::move(m)), gen_(std::move(g)) {}

  /// (xi_n^M)_n drawn from a shared engine.
  static SummabilityMethod repeated_averages(std::shared_ptr<RepeatedAverages> engine, const Ordinal& xi,
                                             const IndexStream& m) {
    return SummabilityMethod("[" + xi.to_string() + "]^" + m.name(), m,
                             [engine, xi, m](std::uint64_t n) { return engine->element(xi, m, n); });
  }

  ProbVector element(std::uint64_t n) const { return gen_(n); }
  const IndexStream& stream() const { return stream_; }
  const std::string& name() const { return name_; }

  /**
   * Checks the first `count` vectors: increasing supports, and concatenated
   * supports equal to the first elements of M. Throws std::logic_error on a
   * violation.
   */
  void validate_prefix(std::uint64_t count) const {
    std::uint64_t position = 0;
    std::optional<std::uint64_t> previous_max;
    for (std::uint64_t n = 1; n <= count; ++n) {
      const ProbVector a = element(n);
      if (previous_max && !(*previous_max < a.min_index()))
        throw std::logic_error(name_ + ": supp A_" + std::to_string(n - 1) + " < supp A_" + std::to_string(n) +
                               " fails");
      for (const auto& [idx, w] : a.vec().entries()) {
        if (stream_.element(++position) != idx)
          throw std::logic_error(name_ + ": supports do not tile M at position " + std::to_string(position));
      }
      previous_max = a.max_index();
    }
  }

 private:
  std::string name_;
  IndexStream stream_;
  Generator gen_;
};

/// A_n . (x_k)_k, with xs[k-1] = x_k.
inline RatVec apply(const SummabilityMethod& method, std::span<const RatVec> xs, std::uint64_t n) {
  const ProbVector a = method.element(n);
  if (a.max_index() > xs.size())
    throw std::out_of_range("sequence has " + std::to_string(xs.size()) + " terms but A_" + std::to_string(n) +
                            " reaches index " + std::to_string(a.max_index()));
  return weighted_sum(a.vec(), [&](std::uint64_t k) -> const RatVec& { return xs[k - 1]; });
}

/// A_n . (x_k)_k for a sequence given as a callable k -> x_k.
template <class Sequence>
  requires std::invocable<Sequence&, std::uint64_t>
RatVec apply(const SummabilityMethod& method, Sequence&& xs, std::uint64_t n) {
  return weighted_sum(method.element(n).vec(), xs);
}

/// Cesaro means u_n = (1/n) sum_{j<=n} x_j for n = 1..xs.size().
inline std::vector<RatVec> cesaro_means(std::span<const RatVec> xs) {
  std::vector<RatVec> out;
  out.reserve(xs.size());
  RatVec running;
  for (std::size_t n = 1; n <= xs.size(); ++n) {
    running = running + xs[n - 1];
    out.push_back(running.scaled(Rational(1, n)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Non-increasing block convex combinations

class AmbiguousReconstruction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * z_n = sum_{j = k_n + 1}^{k_{n+1}} alpha(j) y_j with k_1 = 0, alpha
 * non-increasing and every block of alpha summing to 1. Indices are 1-based:
 * breakpoints[n-1] = k_n, weights[j-1] = alpha(j).
 */
struct NibccWitness {
  std::vector<std::uint64_t> breakpoints;
  std::vector<Rational> weights;

  std::size_t blocks() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
  std::uint64_t k(std::size_t n) const { return breakpoints.at(n - 1); }
  const Rational& alpha(std::uint64_t j) const { return weights.at(j - 1); }

  /// Structural validity: k_1 = 0, k strictly increasing, alpha non-increasing, block sums 1.
  bool is_valid() const {
    if (breakpoints.empty() || breakpoints.front() != 0 || weights.size() != breakpoints.back()) return false;
    for (std::size_t n = 1; n < breakpoints.size(); ++n) {
      if (breakpoints[n] <= breakpoints[n - 1]) return false;
      Rational s = 0;
      for (auto j = breakpoints[n - 1]; j < breakpoints[n]; ++j) s += weights[j];
      if (s != 1) return false;
    }
    for (std::size_t j = 1; j < weights.size(); ++j)
      if (weights[j] > weights[j - 1]) return false;
    return true;
  }

  /// Whether the witness rebuilds z exactly from y.
  bool reproduces(std::span<const RatVec> z, std::span<const RatVec> y) const {
    if (z.size() != blocks() || breakpoints.back() > y.size()) return false;
    for (std::size_t n = 1; n <= blocks(); ++n) {
      RatVec acc;
      for (auto j = k(n) + 1; j <= k(n + 1); ++j) acc = acc.axpy(alpha(j), y[j - 1]);
      if (acc != z[n - 1]) return false;
    }
    return true;
  }
};

namespace detail {

inline bool supports_pairwise_disjoint(std::span<const RatVec> y) {
  std::vector<std::uint64_t> all;
  for (const auto& v : y) {
    if (v.is_zero()) return false;
    for (const auto& e : v.entries()) all.push_back(e.first);
  }
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

/**
 * Solves sum_i a_i y_i = target, sum_i a_i = 1 exactly. Returns nullopt when
 * inconsistent; throws AmbiguousReconstruction when the solution is not unique.
 */
inline std::optional<std::vector<Rational>> solve_block(std::span<const RatVec> ys, const RatVec& target) {
  const std::size_t unknowns = ys.size();
  std::vector<std::uint64_t> coords;
  for (const auto& v : ys)
    for (const auto& e : v.entries()) coords.push_back(e.first);
  for (const auto& e : target.entries()) coords.push_back(e.first);
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());

  // augmented matrix: one row per coordinate plus the sum-to-one row
  std::vector<std::vector<Rational>> rows;
  for (auto c : coords) {
    std::vector<Rational> row(unknowns + 1);
    for (std::size_t i = 0; i < unknowns; ++i) row[i] = ys[i][c];
    row[unknowns] = target[c];
    rows.push_back(std::move(row));
  }
  rows.emplace_back(unknowns + 1, Rational(1));

  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t col = 0; col < unknowns && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const Rational inv = 1 / rows[rank][col];
    for (auto& v : rows[rank]) v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rational f = rows[r][col];
      for (std::size_t c = col; c <= unknowns; ++c) rows[r][c] -= f * rows[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (rows[r][unknowns] != 0) return std::nullopt;
  if (rank < unknowns) throw AmbiguousReconstruction("block coefficients are not uniquely determined");
  std::vector<Rational> a(unknowns);
  for (std::size_t r = 0; r < rank; ++r) a[pivot_col[r]] = rows[r][unknowns];
  return a;
}

}  // namespace detail

/**
 * Finds the NIBCC witness expressing the finite prefix z as a non-increasing
 * block convex combination of the prefix y, or nullopt when none exists.
 *
 * With pairwise disjoint y supports (every use inside this library) the
 * coefficients are read off coordinates. Otherwise each block is solved
 * exactly, taking the shortest block that fits; a block whose coefficients are
 * not unique raises AmbiguousReconstruction. Running out of y in the middle of
 * a block is a precondition failure (std::invalid_argument).
 */
inline std::optional<NibccWitness> check_nibcc(std::span<const RatVec> z, std::span<const RatVec> y) {
  NibccWitness w;
  w.breakpoints.push_back(0);
  std::size_t j = 0;

  if (detail::supports_pairwise_disjoint(y)) {
    for (const auto& zn : z) {
      RatVec rebuilt;
      Rational block_sum = 0;
      const std::size_t block_start = j;
      while (j < y.size()) {
        const auto c = y[j].min_index();
        const Rational zc = zn[c];
        if (zc == 0) break;
        const Rational a = zc / y[j][c];
        rebuilt = rebuilt.axpy(a, y[j]);
        block_sum += a;
        w.weights.push_back(a);
        ++j;
        if (rebuilt == zn) break;
      }
      if (j == block_start) return std::nullopt;
      if (rebuilt != zn) {
        if (j == y.size()) throw std::invalid_argument("y prefix ends inside a block of z");
        return std::nullopt;
      }
      if (block_sum != 1) return std::nullopt;
      w.breakpoints.push_back(j);
    }
  } else {
    for (const auto& zn : z) {
      bool found = false;
      for (std::size_t len = 1; j + len <= y.size() && !found; ++len) {
        auto a = detail::solve_block(y.subspan(j, len), zn);
        if (!a) continue;
        w.weights.insert(w.weights.end(), a->begin(), a->end());
        j += len;
        w.breakpoints.push_back(j);
        found = true;
      }
      if (!found) return std::nullopt;
    }
  }

  for (std::size_t i = 1; i < w.weights.size(); ++i)
    if (w.weights[i] > w.weights[i - 1]) return std::nullopt;
  return w;
}

/**
 * beta_n(j), j = 1..k_{n+1}:
 *   beta_n(k_{n+1}) = alpha(k_{n+1}) * k_{n+1},
 *   beta_n(j)       = (alpha(j) - alpha(j+1)) * j   for j < k_{n+1}.
 * With u_j the Cesaro means of y, (1/n) sum_{j<=n} z_j = (1/n) sum_j beta_n(j) u_j
 * and sum_j beta_n(j) = n. Result index j-1 holds beta_n(j).
 */
inline std::vector<Rational> cesaro_reweight(const NibccWitness& w, std::uint64_t n) {
  if (n == 0 || n > w.blocks()) throw std::out_of_range("cesaro_reweight: n outside the witness prefix");
  const std::uint64_t last = w.k(n + 1);
  std::vector<Rational> beta(last);
  for (std::uint64_t j = 1; j < last; ++j) beta[j - 1] = (w.alpha(j) - w.alpha(j + 1)) * j;
  beta[last - 1] = w.alpha(last) * last;
  return beta;
}

struct CesaroIdentity {
  RatVec lhs;  ///< (1/n) sum_{j<=n} z_j
  RatVec rhs;  ///< (1/n) sum_j beta_n(j) u_j
  Rational beta_sum;
  bool holds() const { return lhs == rhs; }
};

/// Evaluates both sides of the Cesaro reweighting identity for prefix length n.
inline CesaroIdentity cesaro_identity(const NibccWitness& w, std::span<const RatVec> z, std::span<const RatVec> y,
                                      std::uint64_t n) {
  const auto beta = cesaro_reweight(w, n);
  if (beta.size() > y.size() || n > z.size()) throw std::out_of_range("cesaro_identity: prefix too short");
  CesaroIdentity out;
  for (std::uint64_t j = 1; j <= n; ++j) out.lhs = out.lhs + z[j - 1];
  out.lhs = out.lhs.scaled(Rational(1, n));
  const auto u = cesaro_means(y.first(beta.size()));
  for (std::size_t j = 0; j < beta.size(); ++j) {
    out.rhs = out.rhs.axpy(beta[j], u[j]);
    out.beta_sum += beta[j];
  }
  out.rhs = out.rhs.scaled(Rational(1, n));
  return out;
}

}  // namespace schreier_lab
