#include <doctest.h>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/power_classes.hpp"
#include "valgroth/sampler.hpp"

using namespace valgroth;

namespace {

std::shared_ptr<const Field> make(const char* name) { return Field::create(parse_field_shorthand(name)); }
FieldDescriptor desc(const char* name) { return parse_field_shorthand(name); }

}  // namespace

TEST_CASE("n-th power membership") {
  auto K = make("Q3((t1))");
  CHECK_FALSE(is_nth_power(K->variable(1), 2));
  CHECK(is_nth_power(K->variable(1).pow(2), 2));
  auto Q3 = make("Q3");
  CHECK(is_nth_power(Q3->from_int(4), 2));
  CHECK(is_nth_power(Q3->from_int(7), 2));
  CHECK_FALSE(is_nth_power(Q3->from_int(2), 2));
  CHECK_FALSE(is_nth_power(Q3->from_int(3), 2));
  CHECK(is_nth_power(Q3->from_int(10), 3));   // 10 = 1 mod 9
  CHECK_FALSE(is_nth_power(Q3->from_int(4), 3));  // 4 is not a cube mod 9
  CHECK(is_nth_power(make("Q2")->from_int(17), 2));
  CHECK_FALSE(is_nth_power(make("Q2")->from_int(5), 2));
  CHECK(is_nth_power(make("R")->from_int(5), 2));
  CHECK_FALSE(is_nth_power(make("R")->from_int(-5), 2));
  CHECK(is_nth_power(make("R")->from_int(-5), 3));
  CHECK_THROWS_AS(is_nth_power(Q3->one(), 1), DomainError);
}

TEST_CASE("characteristic p powers") {
  auto K = make("F3((t1))((t2))");
  auto t1 = K->variable(1), t2 = K->variable(2);
  CHECK(is_nth_power(t1.pow(3) + t2.pow(6), 3));
  CHECK_FALSE(is_nth_power(t1 + t2.pow(3), 3));
  CHECK(is_nth_power((K->one() + t1).pow(6), 6));
  CHECK(nth_root(t1.pow(3) + t2.pow(6), 3).identical(t1 + t2.pow(2)));
  CHECK(nth_root(K->variable(1).pow(2), 2).identical(K->variable(1)));
}

TEST_CASE("canonical roots") {
  auto Q3 = make("Q3");
  auto r = nth_root(Q3->from_int(4), 2);
  CHECK(r.identical(Q3->from_int(-2)));

  auto F3 = make("F3((t1))");
  CHECK(nth_root(F3->variable(1).pow(2), 2).identical(F3->variable(1)));

  auto K = make("Q3((t1))");
  auto t = K->variable(1);
  auto s = nth_root(K->one() + t, 2);
  CHECK_FALSE(s.is_exact());
  REQUIRE(s.node().terms.size() >= 3);
  CHECK(s.to_string().rfind("1 + 1/2*t1 - 1/8*t1^2", 0) == 0);
  CHECK((s * s).equal_at_precision(K->one() + t));
  CHECK(nth_root((K->one() + t).pow(2), 2).identical(K->one() + t));
  CHECK(nth_root(K->from_int(9) * t.pow(4), 2).identical(K->from_int(3) * t.pow(2)));  // ac 1 beats ac 2
}

TEST_CASE("p-adic roots that need Hensel lifting") {
  auto Q5 = make("Q5");
  auto r = nth_root(Q5->from_int(-1), 2);  // ac 2 or 3; least is 2
  CHECK_FALSE(r.is_exact());
  CHECK(Q5->residue_to_string(r.angular_component()) == "2");
  CHECK((r * r).equal_at_precision(Q5->from_int(-1)));
  auto Q2 = make("Q2");
  auto s = nth_root(Q2->from_int(17), 2);
  CHECK((s * s).equal_at_precision(Q2->from_int(17)));
  CHECK(Q2->base().unit_digits(Q2->node_leading_coef(s.node(), 0), 2) == 1);
}

TEST_CASE("real model roots") {
  auto R = make("R((t1))");
  auto t = R->variable(1);
  auto r = nth_root(R->from_int(2) * t.pow(2), 2);
  CHECK((r * r).identical(R->from_int(2) * t.pow(2)));
  CHECK(R->base().real(R->node_leading_coef(r.node(), 1)).sign() > 0);
  CHECK(nth_root(R->from_int(-8), 3).identical(R->from_int(-2)));
  CHECK_THROWS_AS(nth_root(R->from_int(2), 3), RepresentationError);
}

TEST_CASE("roots of unity and indices") {
  CHECK(roots_of_unity_count(desc("Q3"), 2) == 2);
  CHECK(roots_of_unity_count(desc("Q5"), 4) == 4);
  CHECK(roots_of_unity_count(desc("F2((t1))"), 2) == 1);
  CHECK(power_index(desc("Q3"), 2).value == 4u);
  CHECK(power_index(desc("Q2"), 2).value == 8u);
  CHECK(power_index(desc("F3((t1))"), 3).infinite());
  CHECK(power_index(desc("F3"), 3).value == 1u);
  CHECK(power_index(desc("R((t1))"), 2).value == 4u);
}

TEST_CASE("structural counts agree with exhaustive enumeration") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (std::uint32_t n = 2; n <= 12; ++n) {
      FieldDescriptor d = desc(("Q" + std::to_string(p)).c_str());
      CAPTURE(p);
      CAPTURE(n);
      CHECK(roots_of_unity_count(d, n) == brute_roots_of_unity(d, n));
      CHECK(*power_index(d, n).value == brute_power_index(d, n));
    }
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u})
    for (std::uint32_t n = 2; n <= 12; ++n) {
      FieldDescriptor d = desc(("F" + std::to_string(q)).c_str());
      CHECK(roots_of_unity_count(d, n) == brute_roots_of_unity(d, n));
      CHECK(*power_index(d, n).value == brute_power_index(d, n));
    }
}

TEST_CASE("lambda and fallback") {
  auto a = lambda_report(desc("Q3"), 2);
  CHECK(a.lambda == 2);
  CHECK_FALSE(a.fallback);
  CHECK(lambda_report(desc("R((t1))"), 2).lambda == 2);
  auto c = lambda_report(desc("F3((t1))"), 3);
  CHECK(c.lambda == 1);
  CHECK(c.fallback);
  CHECK(c.s_n.infinite());
  auto e = lambda_report(desc("F5((t1))"), 2);
  CHECK(e.fallback);  // no root capability over finite fields by default
  CHECK(lambda_report(desc("Q3((t1))"), 3).lambda == 27);
  CHECK(lambda_report(desc("Q3((t1))"), 2).lambda == 4);
}

TEST_CASE("subgroup H sweep") {
  CHECK(subgroup_H(desc("Q3")).generator == 1);
  CHECK(subgroup_H(desc("F3((t1))")).generator == 0);
  auto bare = subgroup_H(desc("R"));
  CHECK(bare.generator == 0);
  CHECK(bare.note.has_value());
  auto deep = subgroup_H(desc("R((t1))((t2))((t3))((t4))((t5))((t6))"));
  CHECK(deep.generator == 1);
  REQUIRE(deep.witnesses.size() >= 4);
  CHECK(deep.witnesses[0] == std::pair<std::uint32_t, std::uint64_t>{2, 63});
  CHECK(deep.witnesses[1] == std::pair<std::uint32_t, std::uint64_t>{3, 728});
  CHECK(deep.witnesses[3].first == 7);
  CHECK(std::gcd(63ull, 728ull) == 7);
}

TEST_CASE("coset representatives") {
  auto Q3 = make("Q3");
  PowerClasses pc(Q3, 2);
  auto reps = pc.coset_representatives();
  REQUIRE(reps.size() == 4);
  CHECK(reps[0].to_string() == "1");
  CHECK(reps[1].to_string() == "2");
  CHECK(reps[2].to_string() == "3");
  CHECK(reps[3].to_string() == "6");

  auto R = make("R((t1))");
  auto rr = PowerClasses(R, 2).coset_representatives();
  REQUIRE(rr.size() == 4);
  CHECK(rr[1].to_string() == "-1");
  CHECK(rr[3].to_string() == "-t1");

  auto F5 = make("F5((t1))");
  auto fr = PowerClasses(F5, 2).coset_representatives();
  REQUIRE(fr.size() == 4);
  CHECK(fr[1].to_string() == "2");
  CHECK(fr[3].to_string() == "2*t1");

  CHECK_THROWS_AS(PowerClasses(make("F3((t1))"), 3), DomainError);
}

TEST_CASE("coset classification is a partition on samples") {
  for (const char* name : {"Q3((t1))", "Q2", "F4((t1))((t2))", "R((t1))"}) {
    auto K = make(name);
    for (std::uint32_t n : {2u, 3u}) {
      if (power_index(K->descriptor(), n).infinite()) continue;
      PowerClasses pc(K, n);
      auto reps = pc.coset_representatives();
      CHECK(reps.size() == *power_index(K->descriptor(), n).value);
      for (std::size_t i = 0; i < reps.size(); ++i) {
        CHECK(pc.class_of(reps[i]) == i);
        for (std::size_t j = i + 1; j < reps.size() && reps.size() <= 36; ++j) CHECK_FALSE(is_nth_power(reps[i] / reps[j], n));
      }
      Sampler s(K, {}, 11);
      for (const auto& x : s.take(150)) {
        if (x.is_zero()) continue;
        std::size_t c = pc.class_of(x);
        CHECK(is_nth_power(x / reps[c], n));
      }
    }
  }
}

TEST_CASE("sampled roots power back") {
  for (const char* name : {"Q3((t1))", "Q2((t1))", "F5((t1))((t2))", "R((t1))"}) {
    auto K = make(name);
    Sampler s(K, {}, 5);
    for (const auto& y : s.take(60)) {
      if (y.is_zero()) continue;
      for (std::uint32_t n : {2u, 3u}) {
        if (K->base().kind() == BaseKind::RealModel && n == 3) continue;
        Element x = y.pow(n);
        REQUIRE(is_nth_power(x, n));
        Element r = nth_root(x, n);
        CHECK(r.pow(n).equal_at_precision(x));
        CHECK(nth_root(r.pow(n), n).equal_at_precision(r));
      }
    }
  }
}
