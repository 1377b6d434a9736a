#pragma once

/**
 * @file schreier.hpp
 * @brief Membership, enumeration, images and traces of the Schreier families S_xi.
 *
 *   S_0      = singletons and the empty set
 *   S_{z+1}  = { F_1 u ... u F_n : n <= F_1 < ... < F_n, F_i in S_z }
 *   S_xi     = { F in S_{xi_n} : n <= min F }   (xi a limit, xi_n its fundamental sequence)
 *
 * plus the empty set in every family. All families are hereditary, which is
 * what makes the greedy decomposition below exact: the longest initial segment
 * of F lying in S_z is at least as long as the first block of any admissible
 * decomposition, and induction over the blocks does the rest.
 */

#include "budget.hpp"
#include "finset.hpp"
#include "index_stream.hpp"
#include "ordinal.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace schreier_lab {

class SchreierHierarchy {
 public:
  explicit SchreierHierarchy(FundamentalSequence rule = default_fundamental_sequence, Budget budget = {})
      : rule_(std::move(rule)), budget_(budget) {}

  const Budget& budget() const { return budget_; }
  const FundamentalSequence& rule() const { return rule_; }

  /// xi_n for a limit xi under this hierarchy's rule.
  Ordinal fundamental(const Ordinal& xi, std::uint64_t n) const { return fundamental_successor_seq(xi, n, rule_); }

  /// F in S_xi, decided by greedy maximal-initial-segment decomposition.
  bool is_member(const Ordinal& xi, const FinSet& f) const {
    if (f.empty()) return true;
    PrefixTable table(f.elements());
    return longest_prefix(xi, table, 0) == f.size();
  }

  /**
   * Number of pieces in the greedy decomposition of F into S_z blocks, where
   * xi = z + 1. F is in S_xi exactly when this is at most min F.
   */
  std::size_t greedy_piece_count(const Ordinal& successor_xi, const FinSet& f) const {
    const Ordinal z = successor_xi.predecessor();
    PrefixTable table(f.elements());
    std::size_t pos = 0, pieces = 0;
    while (pos < f.size()) {
      pos += longest_prefix(z, table, pos);
      ++pieces;
    }
    return pieces;
  }

  /**
   * Exhaustive membership test straight from the recursive definition: every
   * split of F into consecutive blocks is tried, with no greedy shortcut.
   * Results are cached per (ordinal, set) across calls.
   */
  bool is_member_oracle(const Ordinal& xi, const FinSet& f) const {
    if (f.size() > budget_.oracle_set_size)
      throw BudgetExceeded("oracle membership limited to |F| <= " + std::to_string(budget_.oracle_set_size));
    return oracle(xi, f.vec());
  }

  /// Every F in S_xi with F inside {1..n}, in lexicographic order.
  std::vector<FinSet> enumerate(const Ordinal& xi, std::uint64_t n) const {
    std::vector<FinSet> out;
    for_each_member(xi, n, [&](const FinSet& f) {
      out.push_back(f);
      return true;
    });
    return out;
  }

  /**
   * Visits members of S_xi inside {1..n} in lexicographic order. The visitor
   * returns false to stop early. Extensions of a non-member are never members
   * (hereditary), which prunes the search.
   */
  template <class Visitor>
  void for_each_member(const Ordinal& xi, std::uint64_t n, Visitor&& visit) const {
    if (n > budget_.enum_universe)
      throw BudgetExceeded("enumeration limited to N <= " + std::to_string(budget_.enum_universe));
    FinSet current;
    std::size_t produced = 0;
    bool keep_going = true;
    auto emit = [&](const FinSet& f) {
      if (++produced > budget_.max_family_size)
        throw BudgetExceeded("enumeration produced more than " + std::to_string(budget_.max_family_size) + " sets");
      keep_going = visit(f);
    };
    emit(current);
    std::function<void(std::uint64_t)> extend = [&](std::uint64_t from) {
      for (std::uint64_t x = from; x <= n && keep_going; ++x) {
        current.push_back(x);
        if (is_member(xi, current)) {
          emit(current);
          if (keep_going) extend(x + 1);
        }
        current.pop_back();
      }
    };
    if (keep_going) extend(1);
  }

  /// F in S_xi^M = { (m_i)_{i in G} : G in S_xi }.
  bool is_member_image(const Ordinal& xi, const IndexStream& m, const FinSet& f) const {
    auto pre = preimage(m, f);
    return pre && is_member(xi, *pre);
  }

  /// F in S_xi[M]; for a hereditary family this is F subset of M and F in S_xi.
  bool trace_member(const Ordinal& xi, const IndexStream& m, const FinSet& f) const {
    return preimage(m, f).has_value() && is_member(xi, f);
  }

  /// Positions of the elements of F inside M, if F lies in the range of M.
  static std::optional<FinSet> preimage(const IndexStream& m, const FinSet& f) {
    std::vector<std::uint64_t> pos;
    pos.reserve(f.size());
    for (auto x : f) {
      auto p = m.position_of(x);
      if (!p) return std::nullopt;
      pos.push_back(*p);
    }
    return FinSet(std::move(pos));
  }

  /**
   * Smallest n <= N such that every F in S_zeta inside {n..N} belongs to S_xi.
   * Certified on the window {1..N} only; nullopt when no n <= N works.
   */
  std::optional<std::uint64_t> threshold(const Ordinal& zeta, const Ordinal& xi, std::uint64_t n_max) const {
    if (!(zeta < xi)) throw std::invalid_argument("threshold requires zeta < xi");
    std::uint64_t worst_min = 0;
    for_each_member(zeta, n_max, [&](const FinSet& f) {
      if (!f.empty() && f.min() > worst_min && !is_member(xi, f)) worst_min = f.min();
      return true;
    });
    if (worst_min + 1 > n_max) return std::nullopt;
    return worst_min + 1;
  }

 private:
  /// Memo of longest admissible prefixes, keyed by ordinal then start position.
  struct PrefixTable {
    explicit PrefixTable(std::span<const std::uint64_t> e) : elems(e) {}
    std::span<const std::uint64_t> elems;
    std::map<Ordinal, std::vector<std::size_t>> memo;
  };

  static constexpr std::size_t kUnknown = static_cast<std::size_t>(-1);

  /**
   * Length of the longest initial segment of elems[start..] lying in S_xi.
   * Every singleton is in every S_xi, so the result is at least 1 whenever
   * start < size.
   */
  std::size_t longest_prefix(const Ordinal& xi, PrefixTable& table, std::size_t start) const {
    const std::size_t len = table.elems.size();
    if (start >= len) return 0;
    auto& row = table.memo[xi];
    if (row.empty()) row.assign(len, kUnknown);
    if (row[start] != kUnknown) return row[start];

    std::size_t result = 1;
    switch (xi.kind()) {
      case OrdinalKind::Zero:
        result = 1;
        break;
      case OrdinalKind::Successor: {
        const Ordinal z = xi.predecessor();
        const std::uint64_t max_pieces = table.elems[start];
        std::size_t pos = start;
        for (std::uint64_t pieces = 0; pos < len && pieces < max_pieces; ++pieces)
          pos += longest_prefix(z, table, pos);
        result = pos - start;
        break;
      }
      case OrdinalKind::Limit: {
        const std::uint64_t m = table.elems[start];
        result = 1;
        for (std::uint64_t n = 1; n <= m && result < len - start; ++n)
          result = std::max(result, longest_prefix(fundamental(xi, n), table, start));
        break;
      }
    }
    row[start] = result;  // std::map nodes are stable under the recursive insertions
    return result;
  }

  bool oracle(const Ordinal& xi, const std::vector<std::uint64_t>& f) const {
    if (f.empty()) return true;
    {
      std::lock_guard lock(oracle_mutex_);
      auto it = oracle_cache_.find({xi, f});
      if (it != oracle_cache_.end()) return it->second;
    }
    bool result = false;
    switch (xi.kind()) {
      case OrdinalKind::Zero:
        result = f.size() <= 1;
        break;
      case OrdinalKind::Successor: {
        const Ordinal z = xi.predecessor();
        result = split_exists(z, f, 0, f.front());
        break;
      }
      case OrdinalKind::Limit:
        for (std::uint64_t n = 1; n <= f.front() && !result; ++n) result = oracle(fundamental(xi, n), f);
        break;
    }
    std::lock_guard lock(oracle_mutex_);
    oracle_cache_.emplace(std::make_pair(xi, f), result);
    return result;
  }

  /// Can f[start..] be cut into at most `pieces_left` consecutive blocks, each in S_z?
  bool split_exists(const Ordinal& z, const std::vector<std::uint64_t>& f, std::size_t start,
                    std::uint64_t pieces_left) const {
    if (start == f.size()) return true;
    if (pieces_left == 0) return false;
    for (std::size_t end = start + 1; end <= f.size(); ++end) {
      std::vector<std::uint64_t> block(f.begin() + static_cast<std::ptrdiff_t>(start),
                                       f.begin() + static_cast<std::ptrdiff_t>(end));
      if (oracle(z, block) && split_exists(z, f, end, pieces_left - 1)) return true;
    }
    return false;
  }

  FundamentalSequence rule_;
  Budget budget_;
  mutable std::mutex oracle_mutex_;
  mutable std::map<std::pair<Ordinal, std::vector<std::uint64_t>>, bool> oracle_cache_;
};

}  // namespace schreier_lab
