#pragma once

#include "finset.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace schreier_lab {

/**
 * Finitely supported rational vector in c_00. Entries are kept sorted by
 * index with no stored zeros, so structural equality is vector equality.
 */
class RatVec {
 public:
  using Entry = std::pair<std::uint64_t, Rational>;

  RatVec() = default;
  RatVec(std::initializer_list<Entry> entries) : RatVec(std::vector<Entry>(entries)) {}

  /// Accepts entries in any order; duplicate indices are summed, zeros dropped.
  explicit RatVec(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& [i, v] : entries) {
      if (i == 0) throw std::invalid_argument("RatVec indices start at 1");
      if (!entries_.empty() && entries_.back().first == i)
        entries_.back().second += v;
      else
        entries_.emplace_back(i, std::move(v));
      if (entries_.back().second == 0) entries_.pop_back();
    }
  }

  /// Entries already strictly increasing in index and non-zero; checked in linear time.
  static RatVec from_sorted(std::vector<Entry> entries) {
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].first == 0 || entries[k].second == 0 || (k > 0 && entries[k].first <= entries[k - 1].first))
        throw std::invalid_argument("RatVec::from_sorted needs strictly increasing indices and non-zero values");
    }
    RatVec v;
    v.entries_ = std::move(entries);
    return v;
  }

  /// e_i
  static RatVec unit(std::uint64_t i, const Rational& scale = 1) { return RatVec({{i, scale}}); }

  /// Sum of e_i over i in F.
  static RatVec indicator(const FinSet& f) {
    RatVec v;
    for (auto i : f) v.entries_.emplace_back(i, Rational(1));
    return v;
  }

  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }

  FinSet support() const {
    std::vector<std::uint64_t> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return FinSet(std::move(s));
  }

  std::uint64_t min_index() const { return entries_.front().first; }
  std::uint64_t max_index() const { return entries_.back().first; }

  Rational operator[](std::uint64_t i) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, std::uint64_t k) { return e.first < k; });
    return it != entries_.end() && it->first == i ? it->second : Rational(0);
  }

  /// this + scale * other
  RatVec axpy(const Rational& scale, const RatVec& other) const {
    RatVec out;
    if (scale == 0) return *this;
    out.entries_.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        out.entries_.push_back(*a++);
      } else if (a == entries_.end() || b->first < a->first) {
        out.entries_.emplace_back(b->first, scale * b->second);
        ++b;
      } else {
        Rational v = a->second + scale * b->second;
        if (v != 0) out.entries_.emplace_back(a->first, std::move(v));
        ++a;
        ++b;
      }
    }
    return out;
  }

  RatVec scaled(const Rational& s) const {
    if (s == 0) return {};
    RatVec out = *this;
    for (auto& e : out.entries_) e.second *= s;
    return out;
  }

  /// Coordinatewise positive part x+ and negative part x- (both non-negative).
  RatVec positive_part() const {
    RatVec out;
    for (const auto& e : entries_)
      if (e.second > 0) out.entries_.push_back(e);
    return out;
  }
  RatVec negative_part() const {
    RatVec out;
    for (const auto& e : entries_)
      if (e.second < 0) out.entries_.emplace_back(e.first, Rational(-e.second));
    return out;
  }

  RatVec abs() const {
    RatVec out = *this;
    for (auto& e : out.entries_) e.second = schreier_lab::abs(e.second);
    return out;
  }

  /// x restricted to F
  RatVec restrict_to(const FinSet& f) const {
    RatVec out;
    for (const auto& e : entries_)
      if (f.contains(e.first)) out.entries_.push_back(e);
    return out;
  }

  Rational sum() const {
    Rational s = 0;
    for (const auto& e : entries_) s += e.second;
    return s;
  }

  Rational l1() const {
    Rational s = 0;
    for (const auto& e : entries_) s += schreier_lab::abs(e.second);
    return s;
  }

  std::string to_string() const {
    std::string out = "{";
    for (const auto& [i, v] : entries_) {
      if (out.size() > 1) out += ", ";
      out += std::to_string(i) + ": " + schreier_lab::to_string(v);
    }
    return out + "}";
  }

  friend RatVec operator+(const RatVec& a, const RatVec& b) { return a.axpy(1, b); }
  friend RatVec operator-(const RatVec& a, const RatVec& b) { return a.axpy(-1, b); }
  friend RatVec operator*(const Rational& s, const RatVec& a) { return a.scaled(s); }
  friend bool operator==(const RatVec&, const RatVec&) = default;

 private:
  std::vector<Entry> entries_;
};

/// <a, F> = sum of a_n over n in F.
inline Rational pair_sum(const RatVec& a, const FinSet& f) {
  Rational s = 0;
  for (const auto& [i, v] : a.entries())
    if (f.contains(i)) s += v;
  return s;
}

/// Sum of weights[k] * xs[k] over the entries of `weights` (1-based sequence indices).
template <class Sequence>
RatVec weighted_sum(const RatVec& weights, Sequence&& xs) {
  std::vector<RatVec::Entry> acc;
  for (const auto& [k, a] : weights.entries()) {
    const RatVec x = xs(k);
    for (const auto& [i, v] : x.entries()) acc.emplace_back(i, a * v);
  }
  return RatVec(std::move(acc));
}

}  // namespace schreier_lab
