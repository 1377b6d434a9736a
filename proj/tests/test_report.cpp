#include "schreier_lab/report.hpp"
#include "schreier_lab/verify.hpp"

#include <gtest/gtest.h>

using namespace schreier_lab;

namespace {

VerifyOptions options(const char* xi, std::uint64_t n) {
  VerifyOptions o;
  o.xi = Ordinal::parse(xi);
  o.n = n;
  o.samples = 50;
  return o;
}

const Json* find_check(const Json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

}  // namespace

TEST(Json, ValuesAndVectors) {
  EXPECT_EQ(to_json(Rational(-3, 6)), "-1/2");
  EXPECT_EQ(to_json(FinSet{2, 5}).dump(), "[2,5]");
  const RatVec v{{2, Rational(1)}, {3, Rational(-1, 2)}};
  EXPECT_EQ(to_json(v).dump(), R"({"entries":{"2":"1","3":"-1/2"}})");
  EXPECT_EQ(rat_vec_from_json(to_json(v)), v);
  EXPECT_EQ(rat_vec_from_json(Json::parse(R"({"entries":{"4":7}})")), RatVec::unit(4, 7));
  EXPECT_THROW(rat_vec_from_json(Json::parse(R"({"entries":{"0":"1"}})")), std::invalid_argument);
  EXPECT_THROW(rat_vec_from_json(Json::parse(R"({"entries":{"x":"1"}})")), std::invalid_argument);
  EXPECT_THROW(rat_vec_from_json(Json::parse(R"({"entries":{"1":1.5}})")), std::invalid_argument);
  EXPECT_THROW(rat_vec_from_json(Json::parse(R"([1,2])")), std::invalid_argument);
  EXPECT_EQ(to_json(NormValue{2, true})["approx"], "1.41421356237");
}

TEST(Report, SchemaAndVerdict) {
  Report r("demo", Json{{"N", 3}});
  r.check("first", true, "never shown");
  r.results()["x"] = "1/2";
  EXPECT_TRUE(r.passed());
  r.check("second", false, "a property", Json{{"k", 1}});
  EXPECT_FALSE(r.passed());
  const Json j = r.to_json();
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_EQ(j["command"], "demo");
  EXPECT_FALSE(j["checks"][0].contains("claim"));
  EXPECT_EQ(j["checks"][1]["claim"], "a property");
  EXPECT_FALSE(j["passed"].get<bool>());
  EXPECT_NE(r.to_text().find("FAIL  second  (a property)"), std::string::npos);
}

TEST(VerifyExample, SchreierPasses) {
  SchreierHierarchy h;
  for (const auto& [xi, n] : std::vector<std::pair<const char*, std::uint64_t>>{{"0", 14}, {"1", 12}}) {
    const Report r = verify_example_schreier(h, options(xi, n));
    EXPECT_TRUE(r.passed()) << r.to_text();
  }
}

TEST(VerifyExample, InjectedConstantFailsWithWitness) {
  SchreierHierarchy h;
  auto o = options("0", 14);
  o.c = Rational(11, 10);
  const Json j = verify_example_schreier(h, o).to_json();
  EXPECT_FALSE(j["passed"].get<bool>());
  const Json* c = find_check(j, "large_check");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE((*c)["passed"].get<bool>());
  EXPECT_TRUE(c->contains("claim"));
  EXPECT_EQ((*c)["details"]["failing_set"].dump(), "[1]");
}

TEST(VerifyExample, StarPassesWithWitness) {
  SchreierHierarchy h;
  for (const auto& [xi, n] : std::vector<std::pair<const char*, std::uint64_t>>{{"0", 14}, {"1", 10}}) {
    const Report r = verify_example_star(h, options(xi, n));
    EXPECT_TRUE(r.passed()) << r.to_text();
    const Json j = r.to_json();
    EXPECT_EQ(j["results"]["sm_constant"]["witness"]["F"].dump(), "[2,3]");
    EXPECT_EQ(j["results"]["sm_constant"]["witness"]["a"].dump(), R"(["1","-1"])");
  }
}

TEST(VerifyExample, PropFormula) {
  const Json one = verify_prop_formula(1, Rational(7)).to_json();
  ASSERT_EQ(one["results"]["rows"].size(), 1u);
  EXPECT_EQ(one["results"]["rows"][0]["vanishing"], "0");
  EXPECT_EQ(one["results"]["rows"][0]["main"], "0");

  const Json hundred = verify_prop_formula(100, Rational(3)).to_json();
  EXPECT_EQ(hundred["results"]["limit_target"], "6");
  EXPECT_TRUE(hundred["passed"].get<bool>());

  const Report big = verify_prop_formula(1000, Rational(1));
  EXPECT_TRUE(big.passed());
  const Rational main = parse_rational(big.to_json()["results"]["final"]["main"].get<std::string>());
  EXPECT_GT(main, Rational(199, 100));
  EXPECT_LT(main, 2);
  EXPECT_THROW(verify_prop_formula(0, 1), std::invalid_argument);
}

TEST(VerifyExample, ReportsAreDeterministic) {
  SchreierHierarchy h;
  EXPECT_EQ(verify_example_schreier(h, options("1", 10)).to_json().dump(),
            verify_example_schreier(SchreierHierarchy{}, options("1", 10)).to_json().dump());
  EXPECT_EQ(verify_example_star(h, options("0", 10)).to_json().dump(),
            verify_example_star(SchreierHierarchy{}, options("0", 10)).to_json().dump());
  EXPECT_EQ(verify_prop_formula(50, Rational(1, 3)).to_json().dump(),
            verify_prop_formula(50, Rational(1, 3)).to_json().dump());
}
