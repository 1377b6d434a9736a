#pragma once

/**
 * @file ordinal.hpp
 * @brief Countable ordinals below omega^omega in Cantor normal form.
 *
 * An ordinal is stored as a strictly decreasing list of (exponent, coefficient)
 * pairs, so omega^2*3 + omega + 1 is {(2,3), (1,1), (0,1)}. Exponents are plain
 * naturals; the optional exponent cap in OrdinalLimits restricts them further.
 *
 * The wire grammar is
 *
 *     sum  := term ("+" term)*
 *     term := "w" ("^" nat)? ("*" nat)? | nat
 *
 * with strictly decreasing exponents.
 */

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schreier_lab {

class OrdinalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OrdinalTerm {
  std::uint32_t exponent = 0;
  std::uint64_t coefficient = 1;

  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
};

struct OrdinalLimits {
  /// Largest exponent accepted by parse(); the default admits every ordinal below omega^omega.
  std::uint32_t max_exponent = std::numeric_limits<std::uint32_t>::max();
};

enum class OrdinalKind { Zero, Successor, Limit };

struct Classification;

class Ordinal {
 public:
  Ordinal() = default;

  static Ordinal natural(std::uint64_t n) {
    Ordinal o;
    if (n > 0) o.terms_.push_back({0, n});
    return o;
  }

  static Ordinal omega_power(std::uint32_t exponent, std::uint64_t coefficient = 1) {
    if (coefficient == 0) return {};
    Ordinal o;
    o.terms_.push_back({exponent, coefficient});
    return o;
  }

  static Ordinal omega() { return omega_power(1); }

  /// Builds an ordinal from CNF terms; rejects non-canonical input.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms, const OrdinalLimits& limits = {}) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].coefficient == 0) throw OrdinalError("ordinal term with zero coefficient");
      if (terms[i].exponent > limits.max_exponent)
        throw OrdinalError("ordinal exponent " + std::to_string(terms[i].exponent) +
                           " exceeds the configured bound " + std::to_string(limits.max_exponent));
      if (i > 0 && terms[i].exponent >= terms[i - 1].exponent)
        throw OrdinalError("ordinal exponents must be strictly decreasing");
    }
    Ordinal o;
    o.terms_ = std::move(terms);
    return o;
  }

  static Ordinal parse(std::string_view text, const OrdinalLimits& limits = {});

  const std::vector<OrdinalTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0); }

  /// Value of a finite ordinal; throws for infinite ones.
  std::uint64_t finite_value() const {
    if (!is_finite()) throw OrdinalError("ordinal " + to_string() + " is not finite");
    return terms_.empty() ? 0 : terms_[0].coefficient;
  }

  Classification classify() const;

  OrdinalKind kind() const {
    if (terms_.empty()) return OrdinalKind::Zero;
    return terms_.back().exponent == 0 ? OrdinalKind::Successor : OrdinalKind::Limit;
  }

  /// The predecessor of a successor ordinal.
  Ordinal predecessor() const {
    if (kind() != OrdinalKind::Successor) throw OrdinalError(to_string() + " is not a successor ordinal");
    Ordinal o = *this;
    if (--o.terms_.back().coefficient == 0) o.terms_.pop_back();
    return o;
  }

  Ordinal successor() const {
    Ordinal o = *this;
    if (!o.terms_.empty() && o.terms_.back().exponent == 0)
      ++o.terms_.back().coefficient;
    else
      o.terms_.push_back({0, 1});
    return o;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += '+';
      if (t.exponent == 0) {
        out += std::to_string(t.coefficient);
        continue;
      }
      out += 'w';
      if (t.exponent > 1) out += '^' + std::to_string(t.exponent);
      if (t.coefficient > 1) out += '*' + std::to_string(t.coefficient);
    }
    return out;
  }

  friend bool operator==(const Ordinal&, const Ordinal&) = default;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const auto n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = a.terms_[i];
      const auto& y = b.terms_[i];
      if (x.exponent != y.exponent) return x.exponent <=> y.exponent;
      if (x.coefficient != y.coefficient) return x.coefficient <=> y.coefficient;
    }
    return a.terms_.size() <=> b.terms_.size();
  }

 private:
  std::vector<OrdinalTerm> terms_;
};

struct Classification {
  OrdinalKind kind;
  Ordinal predecessor;  // zero unless kind == Successor
};

inline Classification Ordinal::classify() const {
  const auto k = kind();
  return {k, k == OrdinalKind::Successor ? predecessor() : Ordinal{}};
}

namespace detail {

inline std::uint64_t parse_nat(std::string_view s, std::string_view whole) {
  if (s.empty()) throw OrdinalError("malformed ordinal '" + std::string(whole) + "': missing number");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw OrdinalError("malformed ordinal '" + std::string(whole) + "'");
    if (v > (std::numeric_limits<std::uint64_t>::max() - (c - '0')) / 10)
      throw OrdinalError("number too large in ordinal '" + std::string(whole) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

}  // namespace detail

inline Ordinal Ordinal::parse(std::string_view text, const OrdinalLimits& limits) {
  std::string compact;
  for (char c : text)
    if (c != ' ' && c != '\t') compact += c;
  std::string_view s = compact;
  if (s.empty()) throw OrdinalError("empty ordinal expression");
  if (s == "0") return {};

  std::vector<OrdinalTerm> terms;
  while (true) {
    auto plus = s.find('+');
    auto term = s.substr(0, plus);
    if (term.empty()) throw OrdinalError("malformed ordinal '" + std::string(text) + "': empty term");
    OrdinalTerm t;
    if (term.front() == 'w') {
      term.remove_prefix(1);
      std::uint64_t exponent = 1;
      if (!term.empty() && term.front() == '^') {
        term.remove_prefix(1);
        auto star = term.find('*');
        exponent = detail::parse_nat(term.substr(0, star), text);
        term = star == std::string_view::npos ? std::string_view{} : term.substr(star);
      }
      if (!term.empty()) {
        if (term.front() != '*') throw OrdinalError("malformed ordinal '" + std::string(text) + "'");
        t.coefficient = detail::parse_nat(term.substr(1), text);
      }
      if (exponent > std::numeric_limits<std::uint32_t>::max())
        throw OrdinalError("ordinal exponent too large in '" + std::string(text) + "'");
      t.exponent = static_cast<std::uint32_t>(exponent);
    } else {
      t.exponent = 0;
      t.coefficient = detail::parse_nat(term, text);
    }
    if (t.coefficient == 0) throw OrdinalError("zero coefficient in ordinal '" + std::string(text) + "'");
    terms.push_back(t);
    if (plus == std::string_view::npos) break;
    s.remove_prefix(plus + 1);
  }
  return from_terms(std::move(terms), limits);
}

/**
 * Rule producing the n-th member (n >= 1) of the fixed increasing sequence of
 * successor ordinals converging to a limit ordinal.
 */
using FundamentalSequence = std::function<Ordinal(const Ordinal& limit, std::uint64_t n)>;

/**
 * Default rule. Write x = rho + omega^(a+1); for a > 0 return
 * rho + omega^a * n + 1, for a = 0 return rho + n. A last-term coefficient
 * c > 1 leaves c - 1 copies of omega^(a+1) inside rho.
 */
inline Ordinal default_fundamental_sequence(const Ordinal& x, std::uint64_t n) {
  if (x.kind() != OrdinalKind::Limit) throw OrdinalError(x.to_string() + " is not a limit ordinal");
  if (n == 0) throw OrdinalError("fundamental sequences are indexed from 1");
  auto terms = x.terms();
  const std::uint32_t a = terms.back().exponent - 1;
  if (--terms.back().coefficient == 0) terms.pop_back();
  if (a > 0) {
    terms.push_back({a, n});
    terms.push_back({0, 1});
  } else {
    terms.push_back({0, n});
  }
  return Ordinal::from_terms(std::move(terms));
}

/// Applies `rule` and checks the result is a successor strictly below the limit.
inline Ordinal fundamental_successor_seq(const Ordinal& x, std::uint64_t n,
                                         const FundamentalSequence& rule = default_fundamental_sequence) {
  if (x.kind() != OrdinalKind::Limit) throw OrdinalError(x.to_string() + " is not a limit ordinal");
  if (n == 0) throw OrdinalError("fundamental sequences are indexed from 1");
  Ordinal r = rule(x, n);
  if (r.kind() != OrdinalKind::Successor || !(r < x))
    throw OrdinalError("fundamental sequence rule produced " + r.to_string() + " for " + x.to_string() +
                       ", which is not a successor below the limit");
  return r;
}

}  // namespace schreier_lab
