#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schreier_lab {

/**
 * A finite set of positive integers kept as a strictly increasing list.
 * Ordering is lexicographic on that list, so {1} < {1,2} < {2}.
 * Wire format: comma separated ascending integers ("2,3,7"; "" is the empty set).
 */
class FinSet {
 public:
  using value_type = std::uint64_t;

  FinSet() = default;
  FinSet(std::initializer_list<value_type> elems) : FinSet(std::vector<value_type>(elems)) {}
  explicit FinSet(std::vector<value_type> elems) : elems_(std::move(elems)) { validate(); }

  static FinSet parse(std::string_view text) {
    std::string_view s = text;
    auto trim = [](std::string_view v) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '{')) v.remove_prefix(1);
      while (!v.empty() && (v.back() == ' ' || v.back() == '}')) v.remove_suffix(1);
      return v;
    };
    s = trim(s);
    std::vector<value_type> out;
    while (!s.empty()) {
      auto comma = s.find(',');
      auto item = trim(s.substr(0, comma));
      if (item.empty()) throw std::invalid_argument("empty element in set '" + std::string(text) + "'");
      value_type v = 0;
      for (char c : item) {
        if (c < '0' || c > '9') throw std::invalid_argument("malformed set '" + std::string(text) + "'");
        if (v > (std::numeric_limits<value_type>::max() - (c - '0')) / 10)
          throw std::invalid_argument("element too large in set '" + std::string(text) + "'");
        v = v * 10 + static_cast<value_type>(c - '0');
      }
      out.push_back(v);
      if (comma == std::string_view::npos) break;
      s.remove_prefix(comma + 1);
    }
    return FinSet(std::move(out));
  }

  /// {lo, lo+1, ..., hi}; empty when hi < lo.
  static FinSet interval(value_type lo, value_type hi) {
    std::vector<value_type> v;
    for (value_type x = lo; x <= hi && lo <= hi; ++x) v.push_back(x);
    return FinSet(std::move(v));
  }

  std::string to_string() const {
    std::string out;
    for (auto x : elems_) {
      if (!out.empty()) out += ',';
      out += std::to_string(x);
    }
    return out;
  }

  std::span<const value_type> elements() const { return elems_; }
  const std::vector<value_type>& vec() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  value_type min() const { return elems_.front(); }
  value_type max() const { return elems_.back(); }
  value_type operator[](std::size_t i) const { return elems_[i]; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  bool contains(value_type x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

  bool is_subset_of(const FinSet& other) const {
    return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
  }

  /// Elements at positions [first, last).
  FinSet slice(std::size_t first, std::size_t last) const {
    FinSet out;
    out.elems_.assign(elems_.begin() + static_cast<std::ptrdiff_t>(first),
                      elems_.begin() + static_cast<std::ptrdiff_t>(last));
    return out;
  }

  /// Subset selected by the bits of `mask` (bit i picks the i-th element).
  FinSet select(std::uint64_t mask) const {
    FinSet out;
    for (std::size_t i = 0; i < elems_.size(); ++i)
      if (mask >> i & 1U) out.elems_.push_back(elems_[i]);
    return out;
  }

  /// Appends x, which must exceed the current maximum.
  void push_back(value_type x) {
    if (x == 0 || (!elems_.empty() && x <= elems_.back()))
      throw std::invalid_argument("FinSet::push_back would break strict increase");
    elems_.push_back(x);
  }
  void pop_back() { elems_.pop_back(); }

  friend bool operator==(const FinSet&, const FinSet&) = default;
  friend auto operator<=>(const FinSet& a, const FinSet& b) { return a.elems_ <=> b.elems_; }

 private:
  void validate() const {
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (elems_[i] == 0) throw std::invalid_argument("FinSet elements must be positive integers");
      if (i > 0 && elems_[i] <= elems_[i - 1])
        throw std::invalid_argument("FinSet elements must be strictly increasing");
    }
  }

  std::vector<value_type> elems_;
};

}  // namespace schreier_lab
