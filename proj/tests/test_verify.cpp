#include <doctest.h>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/verify.hpp"

using namespace valgroth;

namespace {

std::shared_ptr<const Field> make(const char* name) { return Field::create(parse_field_shorthand(name)); }

SuiteConfig small(std::vector<std::string> fields, std::vector<std::string> suites, std::size_t samples = 150) {
  SuiteConfig c;
  c.fields = std::move(fields);
  c.suites = std::move(suites);
  c.samples = samples;
  c.seed = 5;
  return c;
}

}  // namespace

TEST_CASE("axioms hold on sampled pairs") {
  for (const char* name : {"Q3((t1))", "F2((t1))((t2))", "R((t1))", "Q2"}) {
    INFO(name);
    SuiteReport r = check_axioms(make(name), 400, 3);
    CHECK(r.passed());
    CHECK(r.samples == 400);
    CHECK(r.skipped * 10 < r.samples);
  }
  SuiteReport bad = check_axioms(make("Q3((t1))"), 200, 3, true);
  CHECK_FALSE(bad.passed());
  CHECK(bad.violations.size() <= 20);
  CHECK(bad.violation_count >= bad.violations.size());
  CHECK(check_axioms(make("R"), 10, 1).not_applicable());
}

TEST_CASE("bijection checks and mutations") {
  auto K = make("Q3((t1))");
  Prop1Maps maps = build_prop1_maps(K);
  SuiteReport ok = check_bijection(maps.f, 300, 9);
  CHECK(ok.passed());
  CHECK(ok.details["exact_roundtrips"].get<std::size_t>() > 0);

  SuiteReport swapped = check_bijection(maps.f.with_swapped_forwards(0, 1), 300, 9);
  CHECK_FALSE(swapped.passed());

  // a forward map that forgets its input collides on every point
  PiecewiseMap g1 = build_g1(K);
  PiecewiseMap constant = g1;
  for (auto& b : constant.branches) b.forward = [K](const TaggedPoint&) { return point(K->one()); };
  SuiteReport col = check_bijection(constant, 100, 9);
  bool injectivity = false;
  for (const auto& v : col.violations) injectivity |= v.check == "injectivity";
  CHECK(injectivity);
}

TEST_CASE("reports are deterministic") {
  SuiteConfig c = small({"Q3((t1))"}, {"g1", "formulas", "crit2"});
  auto a = run_suite(c);
  auto b = run_suite(c);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].to_json().dump() == b[i].to_json().dump());
  CHECK_FALSE(a[0].to_json().contains("wall_time_s"));
  CHECK(a[0].to_json(true).contains("wall_time_s"));
}

TEST_CASE("suite selection and applicability") {
  auto reports = run_suite(small({"Q3((t1))"}, {"g4", "g5", "ledger"}));
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].not_applicable());
  CHECK(reports[1].not_applicable());
  CHECK(reports[0].status() == "skipped");
  CHECK(reports[2].status() == "pass");
  CHECK(all_passed(reports));

  CHECK_THROWS_AS(run_suite(small({"Q3"}, {"nosuch"})), ConfigError);
  SuiteConfig m = small({"Q3"}, {"g1"});
  m.mutations = {"nosuch"};
  CHECK_THROWS_AS(run_suite(m), ConfigError);
  CHECK_THROWS_AS(run_suite(small({}, {"g1"})), ConfigError);
}

TEST_CASE("every mutation is caught by its suite") {
  const std::map<std::string, std::string> suite_for = {{"bijections", "g1"}};
  for (const auto& [mutation, target] : mutation_targets()) {
    INFO(mutation);
    std::string suite = suite_for.count(target) ? suite_for.at(target) : target;
    SuiteConfig c = small({"Q3((t1))"}, {suite}, 200);
    c.mutations = {mutation};
    auto reports = run_suite(c);
    CHECK_FALSE(all_passed(reports));
  }
}

TEST_CASE("config parsing") {
  auto j = nlohmann::json::parse(R"j({"fields": ["Q3", "F3((t1))"], "suites": ["g1"], "seed": 4, "samples": 20})j");
  SuiteConfig c = suite_config_from_json(j);
  CHECK(c.fields.size() == 2);
  CHECK(c.seed == 4);
  CHECK(c.samples == 20);
  CHECK(suite_config_from_json(c.to_json()).to_json() == c.to_json());
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse(R"({"feilds": []})")), ConfigError);
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse(R"({"seed": "x"})")), ConfigError);
  CHECK_THROWS_AS(suite_config_from_json(nlohmann::json::parse("[]")), ConfigError);
}
