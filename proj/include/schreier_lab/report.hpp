#pragma once

/**
 * @file report.hpp
 * @brief Versioned JSON reports and their plain-text rendering.
 *
 * Reports hold exact values as strings ("p/q") next to a double for humans.
 * Nothing time-dependent goes into the JSON, so identical flags give identical
 * bytes.
 */

#include "finset.hpp"
#include "quantities.hpp"
#include "rat_vec.hpp"
#include "rational.hpp"
#include "spaces.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace schreier_lab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "schreier-lab/report/v1";

inline Json to_json(const Rational& q) { return to_string(q); }

inline Json to_json(const FinSet& f) {
  Json a = Json::array();
  for (auto x : f) a.push_back(x);
  return a;
}

inline Json to_json(const RatVec& v) {
  Json o = Json::object();
  for (const auto& [i, q] : v.entries()) o[std::to_string(i)] = to_string(q);
  return Json{{"entries", o}};
}

inline Json to_json(const NormValue& v) {
  Json o{{"exact", to_string(v.exact)}, {"squared", v.squared}};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v.approx());
  o["approx"] = buf;
  return o;
}

inline Json to_json(const NormResult& r) {
  Json o{{"value", to_json(r.value)}};
  Json w = Json::array();
  for (const auto& f : r.witness) w.push_back(to_json(f));
  o["witness"] = w;
  if (!r.part.empty()) o["part"] = r.part;
  return o;
}

inline Json to_json(const HorizonEstimate& e) {
  return Json{{"value", to_json(e.value)}, {"direction", to_string(e.direction)}, {"horizon", e.horizon}};
}

inline Json to_json(const WindowStat& w) {
  Json o{{"value", to_json(w.value)}, {"window", {w.n0, w.n}}};
  if (w.pair) o["pair"] = {w.pair->first, w.pair->second};
  return o;
}

/// Parses {"entries": {"2": "1", "3": "-1/2"}}.
inline RatVec rat_vec_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_object())
    throw std::invalid_argument(R"(vector JSON must look like {"entries": {"2": "1"}})");
  std::vector<RatVec::Entry> entries;
  for (const auto& [key, value] : j.at("entries").items()) {
    if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("vector index '" + key + "' is not a positive integer");
    Rational q;
    if (value.is_string())
      q = parse_rational(value.get<std::string>());
    else if (value.is_number_integer())
      q = Rational(value.get<long long>());
    else
      throw std::invalid_argument(R"(vector values must be "p/q" strings or integers)");
    entries.emplace_back(std::stoull(key), std::move(q));
  }
  return RatVec(std::move(entries));
}

/**
 * A verification bundle: config echo, named checks, free-form results. The
 * overall verdict is the conjunction of the checks.
 */
class Report {
 public:
  Report(std::string command, Json config) : command_(std::move(command)), config_(std::move(config)) {}

  void check(const std::string& name, bool passed, const std::string& claim, Json details = Json::object()) {
    Json c{{"name", name}, {"passed", passed}};
    if (!passed) c["claim"] = claim;
    c["details"] = std::move(details);
    checks_.push_back(std::move(c));
    passed_ = passed_ && passed;
  }

  Json& results() { return results_; }
  bool passed() const { return passed_; }

  Json to_json() const {
    return Json{{"schema", kReportSchema}, {"command", command_}, {"config", config_},
                {"checks", checks_},      {"results", results_}, {"passed", passed_}};
  }

  /// One line per check, then the verdict.
  std::string to_text() const {
    std::ostringstream out;
    out << command_ << "  " << config_.dump() << "\n";
    for (const auto& c : checks_) {
      out << (c["passed"].get<bool>() ? "  PASS  " : "  FAIL  ") << c["name"].get<std::string>();
      if (c.contains("claim")) out << "  (" << c["claim"].get<std::string>() << ")";
      out << "\n";
    }
    out << (passed_ ? "PASSED" : "FAILED") << "\n";
    return out.str();
  }

 private:
  std::string command_;
  Json config_;
  Json checks_ = Json::array();
  Json results_ = Json::object();
  bool passed_ = true;
};

}  // namespace schreier_lab
