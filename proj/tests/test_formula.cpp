#include <doctest.h>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/formula.hpp"

using namespace valgroth;

namespace {

std::shared_ptr<const Field> make(const char* name) { return Field::create(parse_field_shorthand(name)); }

std::size_t count_kind(const FormulaPtr& f, Formula::Kind k) {
  std::size_t n = f->kind == k ? 1 : 0;
  for (const auto& c : f->children) n += count_kind(c, k);
  return n;
}

std::size_t error_column(const std::string& text, const Signature& sig = {}) {
  try {
    parse_formula(text, sig);
  } catch (const SyntaxError& e) {
    return e.column();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse the ring formula") {
  FormulaPtr f = parse_formula("P2(1 + t1*x^2) && P2(1 + p*x^2)");
  REQUIRE(f->kind == Formula::Kind::And);
  CHECK(f->children.size() == 2);
  CHECK(count_kind(f, Formula::Kind::PowerClass) == 2);
  CHECK(f->children[0]->n == 2);
  CHECK(print(f) == "P2(1 + t1*x^2) && P2(1 + p*x^2)");
}

TEST_CASE("power class index below 2 is rejected") {
  CHECK_THROWS_AS(parse_formula("P1(x)"), SyntaxError);
  CHECK_THROWS_AS(parse_formula("P0(x)"), SyntaxError);
  CHECK_THROWS_AS(make_power_class(1, make_name("x")), DomainError);
}

TEST_CASE("precedence and printing") {
  CHECK(print(parse_term("1 - (2 - x)")) == "1 - (2 - x)");
  CHECK(print(parse_term("(1 - 2) - x")) == "1 - 2 - x");
  CHECK(print(parse_term("x/(t1*x)")) == "x/(t1*x)");
  CHECK(print(parse_term("-x^2")) == "-x^2");
  CHECK(print(parse_term("(-x)^2")) == "(-x)^2");
  CHECK(print(parse_term("(x^2)^3")) == "(x^2)^3");
  CHECK(print(parse_formula("a = 0 || b = 0 && c = 0", Signature{{"a", "b", "c"}, nullptr})) ==
        "a = 0 || b = 0 && c = 0");
  CHECK(print(parse_formula("(x = 0 || x = 1) && x != 2")) == "(x = 0 || x = 1) && x != 2");
  CHECK(print(parse_formula("!(x = 0)")) == "!(x = 0)");
  CHECK(print(parse_formula("!(P2(x) && v(x) > 0)")) == "!(P2(x) && v(x) > 0)");
  // explicit grouping of the same operator survives a round trip
  FormulaPtr g = parse_formula("(x = 0 || x = 1) || x = 2");
  CHECK(g->children.size() == 2);
  CHECK(same_formula(parse_formula(print(g)), g));
}

TEST_CASE("corpus round trip") {
  auto K = make("F5((t1))((t2))");
  Signature any;
  for (const auto& text : formula_corpus()) {
    INFO(text);
    FormulaPtr f = parse_formula(text, any);
    std::string once = print(f);
    FormulaPtr g = parse_formula(once, any);
    CHECK(same_formula(f, g));
    CHECK(print(g) == once);
  }
  CHECK(formula_corpus().size() >= 20);
}

TEST_CASE("malformed inputs report columns") {
  CHECK(malformed_corpus().size() >= 10);
  for (const auto& [text, col] : malformed_corpus()) {
    INFO(text);
    CHECK(error_column(text) == col);
  }
}

TEST_CASE("names are checked against the field") {
  Signature q3{{"x"}, make("Q3((t1))")};
  CHECK_NOTHROW(parse_formula("P2(1 + t1*x^2) && P2(1 + p*x^2)", q3));
  CHECK(error_column("P2(t2*x)", q3) == 4);
  CHECK(error_column("x = g", q3) == 5);
  Signature f5{{"x"}, make("F5((t1))")};
  CHECK(error_column("x = p", f5) == 5);
  CHECK_NOTHROW(parse_formula("P2(g*x)", f5));
  Signature xy{{"x", "y"}, nullptr};
  CHECK_NOTHROW(parse_formula("v(x) < v(y)", xy));
  CHECK(error_column("v(z) < v(y)", xy) == 3);
}

TEST_CASE("evaluate the ring formula on Q3((t1))") {
  auto K = make("Q3((t1))");
  Signature sig{{"x"}, K};
  DefinableSet R{parse_formula("P2(1 + t1*x^2) && P2(1 + p*x^2)", sig), "x", K};
  CHECK(R.contains(K->variable(1)));
  CHECK(R.contains(K->zero()));
  CHECK(R.contains(K->from_int(3)));
  CHECK_FALSE(R.contains(K->from_rational(mpq_class(1, 3))));
  CHECK_FALSE(R.contains(K->variable(1).inverse()));
  auto trace = atom_trace(R.formula, *K, {{"x", K->from_rational(mpq_class(1, 3))}});
  REQUIRE(trace.size() == 2);
  CHECK(trace[0].second);
  CHECK_FALSE(trace[1].second);
}

TEST_CASE("atom semantics") {
  auto K = make("F5((t1))");
  Element t = K->variable(1);
  Signature sig{{"x"}, K};
  auto holds = [&](const char* text, const Element& x) { return evaluate(parse_formula(text, sig), *K, {{"x", x}}); };
  CHECK_FALSE(holds("P2(x)", K->zero()));
  CHECK(holds("P2(x)", K->from_int(4)));
  CHECK_FALSE(holds("P2(x)", K->from_int(2)));
  CHECK_FALSE(holds("P2(x)", t));
  CHECK(holds("P2(t1*x)", t));
  CHECK(holds("v(x) > 0", t));
  CHECK(holds("v(x) > v(t1)", K->zero()));  // v(0) is infinite
  CHECK(holds("v(x) < v(1)", t.inverse()));
  CHECK(holds("ac(x) = 3", K->from_int(3) * t));
  CHECK_FALSE(holds("ac(x) = 3", K->from_int(2) * t));
  CHECK(holds("(x + 1)^2 = x^2 + 2*x + 1", t + K->one()));
  CHECK(holds("x != 0", t));
  CHECK_THROWS_AS(holds("1/x = 0", K->zero()), DomainError);
}

TEST_CASE("builtin definitions") {
  auto K = make("Q3((t1))");
  BuiltinSets b = builtin_sets(K);
  CHECK(print(b.ring.formula) == "P2(1 + t1*x^2) && P2(1 + p*x^2)");
  CHECK(print(b.ring_ac1.formula).find("P2(p*t1*x)") != std::string::npos);

  auto F2 = make("F2((t1))((t2))");
  BuiltinSets c = builtin_sets(F2);
  CHECK(print(c.ring.formula) == "P3(1 + t2*x^3) && P3(1 + t1*x^3)");
  CHECK(print(c.ring_ac1.formula) == "(P3(1 + t2*x^3) && P3(1 + t1*x^3)) && !(x = 0)");
  CHECK_FALSE(c.notes.empty());

  CHECK_THROWS_AS(builtin_sets(make("R((t1))")), DomainError);
  CHECK_FALSE(builtin_sets(make("F4((t1))")).notes.empty());
}

TEST_CASE("builtin definitions agree with the semantics") {
  for (const char* name : {"Q3", "Q3((t1))", "Q2((t1))", "Q5", "F2((t1))((t2))", "F3((t1))((t2))", "F5((t1))",
                           "F4((t1))", "Q2"}) {
    INFO(name);
    auto K = make(name);
    BuiltinSets b = builtin_sets(K);
    EquivalenceReport r = check_equivalence(b.ring, semantic_ring, 300, 11);
    CHECK(r.counterexamples.empty());
    CHECK(r.skipped * 10 < r.samples);
    EquivalenceReport r1 = check_equivalence(b.ring_ac1, semantic_ring_ac1, 300, 12);
    CHECK(r1.counterexamples.empty());
    CHECK(r1.skipped * 10 < r1.samples);
  }
}

TEST_CASE("mutations are caught") {
  auto K = make("Q3((t1))");
  BuiltinSets b = builtin_sets(K);
  DefinableSet dropped{mutate(b.ring.formula, FormulaMutation::DropLastConjunct), "x", K};
  CHECK(print(dropped.formula) == "P2(1 + t1*x^2)");
  EquivalenceReport r = check_equivalence(dropped, semantic_ring, 300, 11);
  CHECK_FALSE(r.counterexamples.empty());

  DefinableSet no_one{mutate(b.ring_ac1.formula, FormulaMutation::DropFirstDisjunct), "x", K};
  EquivalenceReport r1 = check_equivalence(no_one, semantic_ring_ac1, 300, 12);
  CHECK_FALSE(r1.counterexamples.empty());
  CHECK(r1.to_json()["counterexamples"].size() == r1.counterexamples.size());

  CHECK(parse_formula_mutation(mutation_name(FormulaMutation::DropFirstDisjunct)) ==
        FormulaMutation::DropFirstDisjunct);
  CHECK_THROWS_AS(parse_formula_mutation("shuffle"), DomainError);
  CHECK_THROWS_AS(mutate(b.ring.formula, FormulaMutation::DropFirstDisjunct), DomainError);
}
