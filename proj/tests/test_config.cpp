#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/sampler.hpp"

using namespace valgroth;

TEST_CASE("shorthand field names") {
  auto d = parse_field_shorthand("Q3((t1))");
  CHECK(d.base == BaseKind::PadicQ);
  CHECK(d.p == 3);
  CHECK(d.layers == std::vector<std::string>{"t1"});
  CHECK(d.root_capability_for(5).has_value());

  auto f = parse_field_shorthand("F4((t1))((t2))");
  CHECK(f.base == BaseKind::FiniteField);
  CHECK(f.q == 4);
  CHECK(f.depth() == 2);
  CHECK_FALSE(f.root_capability_for(3).has_value());

  auto r = parse_field_shorthand("R");
  CHECK(r.base == BaseKind::RealModel);
  CHECK(r.depth() == 0);

  CHECK_THROWS_AS(parse_field_shorthand("Q4"), ConfigError);
  CHECK_THROWS_AS(parse_field_shorthand("F6((t1))"), ConfigError);
  CHECK_THROWS_AS(parse_field_shorthand("Z5"), ConfigError);
  CHECK_THROWS_AS(parse_field_shorthand("R7"), ConfigError);
}

TEST_CASE("json round trip") {
  auto d = parse_field_shorthand("F9((t1))((t2))");
  d.cutoff = 12;
  auto back = descriptor_from_json(descriptor_to_json(d));
  CHECK(back.q == 9);
  CHECK(back.p == 3);
  CHECK(back.cutoff == 12);
  CHECK(back.layers == d.layers);
  CHECK(back.root_capability == d.root_capability);
}

TEST_CASE("json config file") {
  auto path = std::filesystem::temp_directory_path() / "valgroth_test_field.json";
  {
    std::ofstream out(path);
    out << R"({"base": {"kind": "padic", "p": 5, "precision": 9}, "layers": ["t1", "t2"],
               "root_capability": {"2": "square roots by Hensel lifting"}})";
  }
  auto d = resolve_field(path.string());
  CHECK(d.p == 5);
  CHECK(d.padic_precision == 9);
  CHECK(d.depth() == 2);
  CHECK(d.root_capability_for(2).has_value());
  CHECK_FALSE(d.root_capability_for(3).has_value());
  std::filesystem::remove(path);

  CHECK_THROWS_AS(descriptor_from_json(nlohmann::json::parse(R"({"base": {"kind": "complex"}})")), ConfigError);
  CHECK_THROWS_AS(descriptor_from_json(nlohmann::json::parse(R"({"layers": []})")), ConfigError);
}

TEST_CASE("sampler is deterministic and covers edge cases") {
  auto K = Field::create(parse_field_shorthand("Q3((t1))"));
  Sampler a(K, {}, 42), b(K, {}, 42);
  auto xs = a.take(200), ys = b.take(200);
  bool has_zero = false, has_unit = false, has_negative = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(xs[i].identical(ys[i]));
    if (xs[i].is_zero()) {
      has_zero = true;
      continue;
    }
    auto v = xs[i].valuation();
    has_unit = has_unit || v.is_zero();
    has_negative = has_negative || v.is_negative();
  }
  CHECK(has_zero);
  CHECK(has_unit);
  CHECK(has_negative);

  SamplerSpec boundary;
  boundary.strategy = SampleStrategy::Boundary;
  Sampler s(K, boundary, 1);
  bool has_min_positive = false;
  for (const auto& x : s.take(20))
    if (!x.is_zero() && x.valuation() == ValTuple::min_positive(2)) has_min_positive = true;
  CHECK(has_min_positive);
}

TEST_CASE("ring strategies respect their constraints") {
  for (const char* name : {"Q2((t1))", "F3((t1))((t2))", "R((t1))"}) {
    auto K = Field::create(parse_field_shorthand(name));
    for (auto strat : {SampleStrategy::Ring, SampleStrategy::Unit, SampleStrategy::RingAc1, SampleStrategy::RingNonzero}) {
      SamplerSpec spec;
      spec.strategy = strat;
      Sampler s(K, spec, 7);
      for (const auto& x : s.take(300)) {
        if (x.is_zero()) {
          CHECK(strat == SampleStrategy::Ring);
          continue;
        }
        auto v = x.valuation();
        CHECK(v >= ValTuple::zero(v.arity()));
        if (strat == SampleStrategy::Unit) CHECK(v.is_zero());
        if (strat == SampleStrategy::RingAc1) CHECK(K->residue_equal(x.angular_component(), K->base().residue_one()));
      }
    }
  }
}
