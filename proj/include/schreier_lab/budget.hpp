#pragma once

#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace schreier_lab {

/// Thrown when a search or construction would exceed a configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/**
 * Hard limits on the combinatorial searches. Family sizes and repeated-average
 * supports grow super-exponentially, so every expensive entry point checks one
 * of these before doing work.
 */
struct Budget {
  std::size_t enum_universe = 20;             ///< largest N for enumerate(xi, N)
  std::size_t max_family_size = 1u << 22;     ///< members produced by one enumeration
  std::size_t oracle_set_size = 20;           ///< |F| accepted by the exhaustive membership oracle
  std::size_t max_support = 1u << 20;         ///< entries of a single repeated-average vector
  std::size_t max_total_entries = 1u << 24;   ///< entries materialised by one averages engine
  std::size_t schreier_norm_support = 24;     ///< |supp x| for Schreier / star norms
  std::size_t baernstein_norm_support = 16;   ///< |supp x| for the Schreier-Baernstein norm
  std::size_t oracle_norm_support = 12;       ///< |supp x| for the exhaustive norm oracle

  /**
   * Defaults overridden by SCHREIER_LAB_BUDGET, a comma separated list of
   * key=value pairs using the field names above, e.g.
   * "max_support=4096,enum_universe=16".
   */
  static Budget from_env() {
    Budget b;
    if (const char* env = std::getenv("SCHREIER_LAB_BUDGET")) b.apply_overrides(env);
    return b;
  }

  void apply_overrides(std::string_view spec) {
    while (!spec.empty()) {
      auto comma = spec.find(',');
      auto item = spec.substr(0, comma);
      spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw std::invalid_argument("budget override '" + std::string(item) + "' is not key=value");
      auto key = item.substr(0, eq);
      std::size_t value = 0;
      try {
        value = std::stoull(std::string(item.substr(eq + 1)));
      } catch (const std::exception&) {
        throw std::invalid_argument("budget override '" + std::string(item) + "' has a non-numeric value");
      }
      field(key) = value;
    }
  }

 private:
  std::size_t& field(std::string_view key) {
    if (key == "enum_universe") return enum_universe;
    if (key == "max_family_size") return max_family_size;
    if (key == "oracle_set_size") return oracle_set_size;
    if (key == "max_support") return max_support;
    if (key == "max_total_entries") return max_total_entries;
    if (key == "schreier_norm_support") return schreier_norm_support;
    if (key == "baernstein_norm_support") return baernstein_norm_support;
    if (key == "oracle_norm_support") return oracle_norm_support;
    throw std::invalid_argument("unknown budget key '" + std::string(key) + "'");
  }
};

}  // namespace schreier_lab
