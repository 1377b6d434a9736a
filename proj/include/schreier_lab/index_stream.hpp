#pragma once

/**
 * @file index_stream.hpp
 * @brief Infinite strictly increasing sequences M = (m_n) of positive integers.
 *
 * Streams are cheap shared handles. Closed-form rules (all, shift:k, cubes,
 * evens, explicit prefix + shifted tail) are evaluated directly; custom and
 * composed rules memoise their prefix behind a mutex, so a handle may be shared
 * between threads.
 */

#include "finset.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace schreier_lab {

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("index stream element overflows 64 bits");
  return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("index stream element overflows 64 bits");
  return r;
}

struct StreamSource {
  explicit StreamSource(std::string n) : name(std::move(n)) {}
  virtual ~StreamSource() = default;
  virtual std::uint64_t at(std::uint64_t n) const = 0;  // 1-based
  std::string name;
};

struct ClosedFormSource final : StreamSource {
  ClosedFormSource(std::string n, std::function<std::uint64_t(std::uint64_t)> f)
      : StreamSource(std::move(n)), fn(std::move(f)) {}
  std::uint64_t at(std::uint64_t n) const override { return fn(n); }
  std::function<std::uint64_t(std::uint64_t)> fn;
};

struct MemoSource final : StreamSource {
  MemoSource(std::string n, std::function<std::uint64_t(std::uint64_t)> f)
      : StreamSource(std::move(n)), fn(std::move(f)) {}

  std::uint64_t at(std::uint64_t n) const override {
    std::lock_guard lock(mutex);
    while (memo.size() < n) {
      const std::uint64_t v = fn(memo.size() + 1);
      if (v == 0 || (!memo.empty() && v <= memo.back()))
        throw std::logic_error("stream '" + name + "' is not strictly increasing at index " +
                               std::to_string(memo.size() + 1));
      memo.push_back(v);
    }
    return memo[n - 1];
  }

  std::function<std::uint64_t(std::uint64_t)> fn;
  mutable std::mutex mutex;
  mutable std::vector<std::uint64_t> memo;
};

}  // namespace detail

class IndexStream {
 public:
  /// m_n = n
  static IndexStream all() {
    return IndexStream(std::make_shared<detail::ClosedFormSource>("all", [](std::uint64_t n) { return n; }));
  }

  /// m_n = n + k
  static IndexStream shift(std::uint64_t k) {
    return IndexStream(std::make_shared<detail::ClosedFormSource>(
        "shift:" + std::to_string(k), [k](std::uint64_t n) { return detail::checked_add(n, k); }));
  }

  /// m_n = n^3
  static IndexStream cubes() {
    return IndexStream(std::make_shared<detail::ClosedFormSource>(
        "cubes", [](std::uint64_t n) { return detail::checked_mul(detail::checked_mul(n, n), n); }));
  }

  /// m_n = 2n
  static IndexStream evens() {
    return IndexStream(std::make_shared<detail::ClosedFormSource>(
        "evens", [](std::uint64_t n) { return detail::checked_mul(2, n); }));
  }

  /**
   * The listed prefix followed by m_n = n + tail_shift for n > |prefix|. The
   * tail must continue the prefix increasingly.
   */
  static IndexStream explicit_prefix(const FinSet& prefix, std::uint64_t tail_shift) {
    const auto k = prefix.size();
    if (k > 0 && k + 1 + tail_shift <= prefix.max())
      throw std::invalid_argument("explicit stream tail does not continue the prefix increasingly");
    std::vector<std::uint64_t> head(prefix.begin(), prefix.end());
    return IndexStream(std::make_shared<detail::ClosedFormSource>(
        "explicit:" + prefix.to_string() + "+" + std::to_string(tail_shift),
        [head = std::move(head), tail_shift](std::uint64_t n) {
          return n <= head.size() ? head[n - 1] : detail::checked_add(n, tail_shift);
        }));
  }

  /// User-supplied monotone generator; monotonicity is checked as the prefix grows.
  static IndexStream custom(std::string name, std::function<std::uint64_t(std::uint64_t)> generator) {
    return IndexStream(std::make_shared<detail::MemoSource>(std::move(name), std::move(generator)));
  }

  /// "all", "shift:<k>", "cubes" or "evens".
  static IndexStream parse(std::string_view text) {
    if (text == "all") return all();
    if (text == "cubes") return cubes();
    if (text == "evens") return evens();
    if (text.starts_with("shift:")) {
      auto digits = text.substr(6);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
        throw std::invalid_argument("malformed stream '" + std::string(text) + "'");
      return shift(std::stoull(std::string(digits)));
    }
    throw std::invalid_argument("unknown stream '" + std::string(text) + "' (expected all|shift:<k>|cubes|evens)");
  }

  /// m_n, n >= 1.
  std::uint64_t element(std::uint64_t n) const {
    if (n == 0) throw std::out_of_range("index streams are indexed from 1");
    return source_->at(detail::checked_add(n, offset_));
  }

  std::uint64_t min() const { return element(1); }

  /// The n with m_n == value, if value lies in the range of the stream.
  std::optional<std::uint64_t> position_of(std::uint64_t value) const {
    if (value < element(1)) return std::nullopt;
    // exponential then binary search over the monotone map n -> m_n
    std::uint64_t lo = 1, hi = 2;
    while (true) {
      std::uint64_t v = 0;
      try {
        v = element(hi);
      } catch (const std::overflow_error&) {
        break;
      }
      if (v >= value) break;
      lo = hi;
      hi = detail::checked_mul(hi, 2);
    }
    // invariant: m_lo < value (or lo == 1 and m_1 == value), m_hi >= value or overflowing
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      std::uint64_t v = 0;
      bool overflow = false;
      try {
        v = element(mid);
      } catch (const std::overflow_error&) {
        overflow = true;
      }
      if (!overflow && v < value)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (element(lo) == value) return lo;
    return std::nullopt;
  }

  bool contains(std::uint64_t value) const { return position_of(value).has_value(); }

  /// The stream with its first `count` elements removed.
  IndexStream drop(std::uint64_t count) const {
    IndexStream s = *this;
    s.offset_ = detail::checked_add(offset_, count);
    return s;
  }

  /// The refinement n -> m_{l_n}, an infinite subsequence of this stream.
  IndexStream compose(const IndexStream& along) const {
    auto outer = *this;
    return custom(name() + "[" + along.name() + "]",
                  [outer, along](std::uint64_t n) { return outer.element(along.element(n)); });
  }

  std::string name() const {
    if (offset_ == 0) return source_->name;
    return source_->name + ">>" + std::to_string(offset_);
  }

  /// Identity of the underlying sequence: equal keys denote the same stream.
  std::pair<const void*, std::uint64_t> key() const { return {source_.get(), offset_}; }

 private:
  explicit IndexStream(std::shared_ptr<const detail::StreamSource> src) : source_(std::move(src)) {}

  std::shared_ptr<const detail::StreamSource> source_;
  std::uint64_t offset_ = 0;
};

}  // namespace schreier_lab
