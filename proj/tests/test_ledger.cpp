#include <doctest.h>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/ledger.hpp"

using namespace valgroth;
using A = Atom;

TEST_CASE("atoms and multisets") {
  for (Atom a : {A::Pt, A::R, A::Runit, A::R1, A::RunitRunit, A::R1Runit}) CHECK(parse_atom(atom_name(a)) == a);
  CHECK_THROWS_AS(parse_atom("Q"), DomainError);
  CHECK(same_multiset({A::Pt, A::R1}, {A::R1, A::Pt}));
  CHECK_FALSE(same_multiset({A::Pt, A::R1}, {A::R1, A::R1}));
  CHECK_FALSE(same_multiset({A::Pt}, {A::Pt, A::Pt}));
}

TEST_CASE("single rule applications") {
  const auto F = Direction::Forward;
  const auto B = Direction::Backward;
  CHECK(same_multiset(apply_rule({A::Pt, A::Runit, A::R1}, find_rule("G1"), F), {A::R1}));
  CHECK(same_multiset(apply_rule({A::RunitRunit}, find_rule("G2"), B), {A::RunitRunit, A::RunitRunit}));
  CHECK(same_multiset(apply_rule({A::R}, find_rule("D1"), F), {A::Pt, A::Runit}));
  CHECK(same_multiset(apply_rule({A::R1Runit}, find_rule("G1xS"), B), {A::Runit, A::RunitRunit, A::R1Runit}));
  // rule must embed
  CHECK_THROWS_AS(apply_rule({A::Pt, A::R1}, find_rule("G1"), F), DomainError);
  // kept slots stay in order, targets are appended
  ClassTerm t = apply_rule({A::R, A::Pt, A::Runit, A::R1}, find_rule("G1"), F, {1, 2, 3});
  CHECK(t == ClassTerm{A::R, A::R1});
  CHECK_THROWS_AS(apply_rule({A::Pt, A::Runit, A::R1}, find_rule("G1"), F, {1, 0, 2}), DomainError);
  CHECK_THROWS_AS(find_rule("G7"), DomainError);
}

TEST_CASE("every rule names a witness") {
  for (const auto& r : rewrite_rules()) {
    CHECK_FALSE(r.witness.empty());
    CHECK_FALSE(r.left.empty());
    CHECK_FALSE(r.right.empty());
  }
}

TEST_CASE("point absorption plan") {
  RewritePlan plan = plan_point_absorption();
  CHECK(plan.start == ClassTerm{A::Pt, A::R1, A::R1Runit});
  CHECK(same_multiset(plan.end, {A::R1, A::R1Runit}));
  CHECK(plan.end == plan.steps.back().after);
  CHECK(plan.steps.size() == 5);
  std::string err;
  CHECK(replay(plan, &err));
  CHECK(err.empty());

  // tampering is caught
  RewritePlan bad = plan;
  bad.steps[1].after.push_back(A::Pt);
  CHECK_FALSE(replay(bad, &err));
  CHECK_FALSE(err.empty());
  bad = plan;
  bad.end = {A::R1};
  CHECK_FALSE(replay(bad));
}

TEST_CASE("ring triviality derivations") {
  auto q3 = parse_field_shorthand("Q3((t1))");
  for (Route r : {Route::HKZ, Route::Crit2}) {
    auto plans = derive_ring_trivial(q3, r);
    CHECK(plans.size() >= 2);
    for (const auto& p : plans) {
      std::string err;
      CHECK_MESSAGE(replay(p, &err), err);
    }
  }
  // HKZ route needs H = Z; the crit2 route does not
  auto f3 = parse_field_shorthand("F3((t1))");
  CHECK_THROWS_AS(derive_ring_trivial(f3, Route::HKZ), DomainError);
  auto plans = derive_ring_trivial(f3, Route::Crit2);
  for (const auto& p : plans) CHECK(replay(p));
  CHECK(parse_route("hkz") == Route::HKZ);
  CHECK(parse_route("crit2") == Route::Crit2);
  CHECK_THROWS_AS(parse_route("other"), DomainError);
}

TEST_CASE("trace and json") {
  RewritePlan plan = plan_point_absorption();
  std::string t = trace(plan);
  CHECK(t.find("G1xS") != std::string::npos);
  CHECK(t.find("G2") != std::string::npos);
  auto j = to_json(plan);
  CHECK(j["steps"].size() == 5);
  CHECK(j["start"].size() == 3);
}
