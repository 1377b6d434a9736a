// schreier-lab: command-line front end over the header-only library.

#include "schreier_lab/schreier_lab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace schreier_lab;

namespace {

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Options {
  std::string format = "json";
  std::string xi = "1";
  std::string zeta = "0";
  std::string set;
  std::string stream = "all";
  std::string image, trace;
  std::string space = "schreier";
  std::string vec;
  std::string c;
  std::string along = "all";
  std::string avg_xi;
  std::uint64_t n = 5;
  std::uint64_t big_n = 12;
  std::uint64_t n0 = 1;
  std::uint64_t terms = 0;
  std::uint64_t l = 10;
  std::uint64_t l_max = 2000;
  std::size_t coeff_budget = 4;
  std::size_t samples = 200;
  bool oracle = false;
};

Json finsets_json(const std::vector<FinSet>& sets) {
  Json a = Json::array();
  for (const auto& f : sets) a.push_back(to_json(f));
  return a;
}

RatVec read_vector(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg.front() == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot read vector file '" + arg.substr(1) + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("vector is not valid JSON: ") + e.what());
  }
  return rat_vec_from_json(j);
}

std::string render_text(const Report& report) {
  const Json j = report.to_json();
  std::ostringstream out;
  out << j["command"].get<std::string>() << "  " << j["config"].dump() << "\n";
  for (const auto& [key, value] : j["results"].items()) {
    out << "  " << key << ": ";
    if (value.is_array() && value.size() > 12)
      out << "[" << value.size() << " items]";
    else if (value.is_string())
      out << value.get<std::string>();
    else
      out << value.dump();
    out << "\n";
  }
  if (!j["checks"].empty()) {
    const std::string checks = report.to_text();
    out << checks.substr(checks.find('\n') + 1);
  }
  return out.str();
}

int emit(const Report& report, const Options& o) {
  if (o.format == "text")
    std::cout << render_text(report);
  else
    std::cout << report.to_json().dump(2) << "\n";
  return report.passed() ? 0 : kExitChecksFailed;
}

Rational parse_c(const std::string& c, const Rational& fallback) { return c.empty() ? fallback : parse_rational(c); }

// ---------------------------------------------------------------- commands

Report run_ordinal(const Options& o) {
  const Ordinal x = Ordinal::parse(o.xi);
  Report r("ordinal", Json{{"xi", o.xi}, {"terms", o.terms}});
  const Classification c = x.classify();
  r.results()["canonical"] = x.to_string();
  r.results()["kind"] = c.kind == OrdinalKind::Zero ? "zero" : c.kind == OrdinalKind::Successor ? "successor" : "limit";
  if (c.kind == OrdinalKind::Successor) r.results()["predecessor"] = c.predecessor.to_string();
  if (c.kind == OrdinalKind::Limit) {
    Json seq = Json::array();
    for (std::uint64_t n = 1; n <= o.terms; ++n) seq.push_back(fundamental_successor_seq(x, n).to_string());
    r.results()["fundamental_sequence"] = seq;
  }
  return r;
}

Report run_member(const SchreierHierarchy& h, const Options& o) {
  const Ordinal xi = Ordinal::parse(o.xi);
  const FinSet f = FinSet::parse(o.set);
  Json config{{"xi", xi.to_string()}, {"set", to_json(f)}};
  if (!o.image.empty()) config["image"] = o.image;
  if (!o.trace.empty()) config["trace"] = o.trace;
  Report r("member", config);
  r.results()["member"] = h.is_member(xi, f);
  if (o.oracle) r.results()["oracle"] = h.is_member_oracle(xi, f);
  if (!o.image.empty()) r.results()["image_member"] = h.is_member_image(xi, IndexStream::parse(o.image), f);
  if (!o.trace.empty()) r.results()["trace_member"] = h.trace_member(xi, IndexStream::parse(o.trace), f);
  return r;
}

Report run_enum(const SchreierHierarchy& h, const Options& o) {
  const Ordinal xi = Ordinal::parse(o.xi);
  Report r("enum", Json{{"xi", xi.to_string()}, {"N", o.big_n}});
  const auto members = h.enumerate(xi, o.big_n);
  r.results()["count"] = members.size();
  r.results()["members"] = finsets_json(members);
  return r;
}

Report run_threshold(const SchreierHierarchy& h, const Options& o) {
  const Ordinal zeta = Ordinal::parse(o.zeta), xi = Ordinal::parse(o.xi);
  Report r("threshold", Json{{"zeta", zeta.to_string()}, {"xi", xi.to_string()}, {"N", o.big_n}});
  const auto n = h.threshold(zeta, xi, o.big_n);
  if (n)
    r.results()["threshold"] = *n;
  else
    r.results()["threshold"] = "not found <= " + std::to_string(o.big_n);
  r.results()["certified_window"] = Json{1, o.big_n};
  return r;
}

Report run_avg(const SchreierHierarchy& h, const Options& o) {
  const Ordinal xi = Ordinal::parse(o.xi);
  const IndexStream m = IndexStream::parse(o.stream);
  Report r("avg", Json{{"xi", xi.to_string()}, {"stream", m.name()}, {"n", o.n}});
  RepeatedAverages engine(h);
  Json vectors = Json::array();
  for (std::uint64_t k = 1; k <= o.n; ++k) {
    const ProbVector& p = engine.element(xi, m, k);
    vectors.push_back(Json{{"n", k}, {"support", to_json(p.vec().support())}, {"weights", to_json(p.vec())["entries"]}});
  }
  r.results()["vectors"] = vectors;
  return r;
}

Report run_norm(const SchreierHierarchy& h, const Options& o) {
  const NormSpec spec = NormSpec::parse(o.space, Ordinal::parse(o.xi));
  const RatVec x = read_vector(o.vec);
  Report r("norm", Json{{"space", spec.to_string()}, {"vec", to_json(x)}});
  r.results()["norm"] = to_json(norm(h, spec, x));
  if (o.oracle) {
    const NormResult exhaustive = norm_oracle(h, spec, x);
    r.results()["oracle"] = to_json(exhaustive);
    r.check("oracle_agrees", exhaustive.value == norm(h, spec, x).value, "branch and bound equals exhaustive search");
  }
  return r;
}

SeqSpec basis_sequence(const Options& o) {
  const NormSpec spec = NormSpec::parse(o.space, Ordinal::parse(o.xi));
  SeqSpec xs = SeqSpec::canonical_basis(spec);
  if (o.along != "all") xs = xs.subsequence(IndexStream::parse(o.along));
  return xs;
}

Json sm_result_json(const SmResult& sm) {
  Json a = Json::array();
  for (const auto& q : sm.witness_coeffs) a.push_back(to_string(q));
  return Json{{"value", to_json(sm.estimate.value)},
              {"direction", to_string(sm.estimate.direction)},
              {"horizon", sm.estimate.horizon},
              {"witness", {{"F", to_json(sm.witness_set)}, {"a", a}}},
              {"sets_tested", sm.sets_tested},
              {"combinations_tested", sm.combinations_tested}};
}

Report run_quantity(const SchreierHierarchy& h, const std::string& which, const Options& o) {
  if (which == "prop") {
    const Rational c = parse_c(o.c, 1);
    Report r("quantity prop", Json{{"l", o.l}, {"c", to_string(c)}});
    const PropFormula p = prop_formula(o.l, c);
    r.results()["vanishing"] = to_string(p.vanishing);
    r.results()["main"] = to_string(p.main);
    r.results()["direction"] = to_string(Direction::Exact);
    return r;
  }
  const SeqSpec xs = basis_sequence(o);
  Json config{{"xi", Ordinal::parse(o.xi).to_string()}, {"space", xs.ambient().to_string()}, {"sequence", xs.describe()}};
  if (which == "sm") {
    config["N"] = o.big_n;
    config["coeff_budget"] = o.coeff_budget;
    Report r("quantity sm", config);
    const SmResult sm = sm_constant(h, Ordinal::parse(o.xi), xs, o.big_n, o.coeff_budget);
    r.results() = sm_result_json(sm);
    return r;
  }
  if (which == "large") {
    const Ordinal xi = Ordinal::parse(o.xi);
    const Rational c = parse_c(o.c, Rational(1) - Rational(1, o.big_n));
    config["c"] = to_string(c);
    config["N"] = o.big_n;
    Report r("quantity large", config);
    const auto gamma = sum_functionals(h, xi, o.big_n, xs.ambient());
    const LargeCheck lc = large_check(h, xi, c, xs, IndexStream::all(), gamma, o.big_n);
    r.results()["value"] = lc.holds;
    r.results()["direction"] = to_string(Direction::Exact);
    r.results()["horizon"] = "F in S_" + xi.to_string() + " inside {1.." + std::to_string(o.big_n) + "}";
    if (lc.failing) r.results()["witness"] = to_json(*lc.failing);
    r.results()["sets_checked"] = lc.sets_checked;
    r.results()["family_size"] = lc.family_size;
    r.results()["certified_evaluations"] = lc.certified_evaluations;
    return r;
  }
  config["n0"] = o.n0;
  config["N"] = o.big_n;
  if (which == "ca") {
    Report r("quantity ca", config);
    r.results()["window"] = to_json(ca_window(h, xs, o.n0, o.big_n));
    return r;
  }
  if (which == "cca") {
    if (!o.avg_xi.empty()) {
      config["avg_xi"] = Ordinal::parse(o.avg_xi).to_string();
      config["stream"] = o.stream;
    }
    Report r("quantity cca", config);
    if (o.avg_xi.empty()) {
      r.results()["window"] = to_json(cca_window(h, xs, o.n0, o.big_n));
    } else {
      RepeatedAverages engine(h);
      r.results()["window"] = to_json(
          cca_xi_window(h, engine, Ordinal::parse(o.avg_xi), IndexStream::parse(o.stream), xs, o.n0, o.big_n));
    }
    return r;
  }
  throw std::invalid_argument("unknown quantity '" + which + "'");
}

Report run_verify(const SchreierHierarchy& h, const std::string& which, const Options& o) {
  if (which == "prop") return verify_prop_formula(o.l_max, parse_c(o.c, 1));
  VerifyOptions v;
  v.xi = Ordinal::parse(o.xi);
  v.n = o.big_n;
  v.coeff_budget = o.coeff_budget;
  v.samples = o.samples;
  if (!o.c.empty()) v.c = parse_rational(o.c);
  return which == "schreier" ? verify_example_schreier(h, v) : verify_example_star(h, v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with Schreier families, repeated averages and Schreier-type norms.",
               "schreier-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  auto* ordinal = app.add_subcommand("ordinal", "Normal form, classification and fundamental sequence of an ordinal");
  ordinal->add_option("--xi", o.xi, "Ordinal, e.g. w^2*3+w+1")->required();
  ordinal->add_option("--terms", o.terms, "Fundamental sequence terms to list for a limit")->capture_default_str();

  auto* member = app.add_subcommand("member", "Membership of a finite set in S_xi");
  member->add_option("--xi", o.xi, "Ordinal index of the family")->required();
  member->add_option("--set", o.set, "Finite set, comma separated ascending, e.g. 2,3,7")->required();
  member->add_flag("--oracle", o.oracle, "Also run the exhaustive oracle");
  member->add_option("--image", o.image, "Also test membership in S_xi^M for stream M (all, shift:k, cubes, evens)");
  member->add_option("--trace", o.trace, "Also test membership in the trace S_xi[M] for stream M");

  auto* enumerate = app.add_subcommand("enum", "Lexicographic list of S_xi inside {1..N}");
  enumerate->add_option("--xi", o.xi, "Ordinal index of the family")->required();
  enumerate->add_option("--max,--N", o.big_n, "Universe size N")->capture_default_str();

  auto* threshold = app.add_subcommand("threshold", "Smallest n with S_zeta restricted to [n, N] inside S_xi");
  threshold->add_option("--zeta", o.zeta, "Smaller ordinal")->required();
  threshold->add_option("--xi", o.xi, "Larger ordinal")->required();
  threshold->add_option("--N", o.big_n, "Window size")->capture_default_str();

  auto* avg = app.add_subcommand("avg", "Repeated averages xi_n^M for n = 1..n");
  avg->add_option("--xi", o.xi, "Ordinal")->required();
  avg->add_option("--stream", o.stream, "Index stream: all, shift:k, cubes, evens")->capture_default_str();
  avg->add_option("--n", o.n, "Number of vectors")->capture_default_str();

  auto* norm_cmd = app.add_subcommand("norm", "Exact norm of a finitely supported vector");
  norm_cmd->add_option("--space", o.space, "l1, l2, sup, schreier, star or baernstein2")->capture_default_str();
  norm_cmd->add_option("--xi", o.xi, "Ordinal for the Schreier-type spaces")->capture_default_str();
  norm_cmd->add_option("--vec", o.vec, R"(Vector as JSON {"entries": {"2": "1"}} or @file.json)")->required();
  norm_cmd->add_flag("--oracle", o.oracle, "Also run the exhaustive search and compare");

  auto* quantity = app.add_subcommand("quantity", "Finite-horizon estimators on the unit vector basis");
  std::string which_quantity;
  quantity->add_option("which", which_quantity, "sm, large, prop, ca or cca")
      ->required()
      ->check(CLI::IsMember({"sm", "large", "prop", "ca", "cca"}));
  quantity->add_option("--xi", o.xi, "Ordinal of the family and of the ambient space")->capture_default_str();
  quantity->add_option("--space", o.space, "Ambient space: l1, l2, sup, schreier, star, baernstein2")
      ->capture_default_str();
  quantity->add_option("--along", o.along, "Take the basis along this stream")->capture_default_str();
  quantity->add_option("--N", o.big_n, "Horizon")->capture_default_str();
  quantity->add_option("--n0", o.n0, "Window start for ca and cca")->capture_default_str();
  quantity->add_option("--c", o.c, "Constant p/q (large: default 1 - 1/N; prop: default 1)");
  quantity->add_option("--coeff-budget", o.coeff_budget, "Largest |F| for sign patterns in sm")->capture_default_str();
  quantity->add_option("--l", o.l, "Parameter l for prop")->capture_default_str();
  quantity->add_option("--avg-xi", o.avg_xi, "cca only: apply repeated averages of this order first");
  quantity->add_option("--stream", o.stream, "cca only: stream for the repeated averages")->capture_default_str();

  auto* verify = app.add_subcommand("verify-example", "Batch verification reports");
  std::string which_verify;
  verify->add_option("which", which_verify, "schreier, star or prop")
      ->required()
      ->check(CLI::IsMember({"schreier", "star", "prop"}));
  verify->add_option("--xi", o.xi, "Ordinal xi; the family checked is S_{xi+1}")->capture_default_str();
  verify->add_option("--N", o.big_n, "Horizon")->capture_default_str();
  verify->add_option("--coeff-budget", o.coeff_budget, "Largest |F| for sign patterns")->capture_default_str();
  verify->add_option("--c", o.c, "Largeness constant (default 1 - 1/N), or c for prop (default 1)");
  verify->add_option("--samples", o.samples, "Random samples for the sampled checks")->capture_default_str();
  verify->add_option("--l-max", o.l_max, "prop: largest l")->capture_default_str();

  app.footer("Environment: SCHREIER_LAB_BUDGET=key=value,... overrides search budgets\n"
             "(enum_universe, max_family_size, oracle_set_size, max_support, max_total_entries,\n"
             "schreier_norm_support, baernstein_norm_support, oracle_norm_support).\n"
             "Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 budget exceeded.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const SchreierHierarchy h(default_fundamental_sequence, Budget::from_env());
    if (*ordinal) return emit(run_ordinal(o), o);
    if (*member) return emit(run_member(h, o), o);
    if (*enumerate) return emit(run_enum(h, o), o);
    if (*threshold) return emit(run_threshold(h, o), o);
    if (*avg) return emit(run_avg(h, o), o);
    if (*norm_cmd) return emit(run_norm(h, o), o);
    if (*quantity) return emit(run_quantity(h, which_quantity, o), o);
    if (*verify) return emit(run_verify(h, which_verify, o), o);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
