#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valgroth/errors.hpp"
#include "valgroth/field.hpp"

namespace valgroth {

/// Malformed formula text.  `column` is 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t column, const std::string& message);
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t column_;
  std::string detail_;
};

// -- terms (field sort) ------------------------------------------------------

struct Term {
  enum class Kind { Int, Name, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind = Kind::Int;
  std::uint64_t value = 0;  // Int literal, or exponent for Pow
  std::string name;         // Name
  std::vector<std::shared_ptr<const Term>> args;
};
using TermPtr = std::shared_ptr<const Term>;

TermPtr make_int(std::uint64_t v);
TermPtr make_name(std::string n);
TermPtr make_unary(Term::Kind k, TermPtr a);
TermPtr make_binary(Term::Kind k, TermPtr a, TermPtr b);
TermPtr make_pow(TermPtr base, std::uint64_t e);

// -- formulas ----------------------------------------------------------------

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };
std::string cmp_text(Cmp c);

struct Formula {
  enum class Kind { True, False, Not, And, Or, PowerClass, ValCmp, AcEq, TermEq };
  Kind kind = Kind::True;
  std::vector<std::shared_ptr<const Formula>> children;  // Not / And / Or
  std::uint32_t n = 0;                                    // PowerClass
  TermPtr lhs, rhs;  // rhs null in ValCmp means "0"; AcEq uses lhs only
  Cmp cmp = Cmp::Eq;
  std::uint64_t residue = 0;  // AcEq literal
};
using FormulaPtr = std::shared_ptr<const Formula>;

FormulaPtr make_and(std::vector<FormulaPtr> cs);
FormulaPtr make_or(std::vector<FormulaPtr> cs);
FormulaPtr make_not(FormulaPtr f);
FormulaPtr make_power_class(std::uint32_t n, TermPtr t);
FormulaPtr make_val_cmp(TermPtr a, Cmp c, TermPtr b);  // b may be null: compare with 0
FormulaPtr make_ac_eq(TermPtr a, std::uint64_t residue);
FormulaPtr make_term_eq(TermPtr a, TermPtr b);

/// Names a formula may mention.  Layer variables t1..tk, the constant p and
/// the generator g are checked against `field` when it is set.
struct Signature {
  std::vector<std::string> variables = {"x"};
  std::shared_ptr<const Field> field;
};

FormulaPtr parse_formula(const std::string& text, const Signature& sig = {});
TermPtr parse_term(const std::string& text, const Signature& sig = {});

std::string print(const FormulaPtr& f);
std::string print(const TermPtr& t);

bool same_formula(const FormulaPtr& a, const FormulaPtr& b);

// -- evaluation --------------------------------------------------------------

using Environment = std::map<std::string, Element>;

Element evaluate_term(const TermPtr& t, const Field& field, const Environment& env);
bool evaluate(const FormulaPtr& f, const Field& field, const Environment& env);

/// One line per atom: its text and truth value.
std::vector<std::pair<std::string, bool>> atom_trace(const FormulaPtr& f, const Field& field, const Environment& env);

/// A formula in one free field-sort variable, bound to a tower.
struct DefinableSet {
  FormulaPtr formula;
  std::string variable = "x";
  std::shared_ptr<const Field> field;

  bool contains(const Element& x) const;
};

struct BuiltinSets {
  DefinableSet ring;           // the valuation ring R
  DefinableSet ring_ac1;       // R1 = {x in R : ac(x) = 1}
  std::vector<std::string> notes;
};

/// Ring-language definitions of R and R1.  The real model has none.
BuiltinSets builtin_sets(std::shared_ptr<const Field> field);

/// Mutations used to check that equivalence testing has teeth.
enum class FormulaMutation { DropLastConjunct, DropFirstDisjunct };
FormulaPtr mutate(const FormulaPtr& f, FormulaMutation m);
FormulaMutation parse_formula_mutation(const std::string& s);
std::string mutation_name(FormulaMutation m);

struct EquivalenceReport {
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t boundary_cases = 0;
  struct Counterexample {
    std::size_t index;
    std::string element;
    bool formula_value;
    bool predicate_value;
  };
  std::vector<Counterexample> counterexamples;
  nlohmann::json to_json() const;
};

using SemanticPredicate = std::function<bool(const Element&)>;

/// Compare membership on `samples` elements (boundary cases first).
EquivalenceReport check_equivalence(const DefinableSet& set, const SemanticPredicate& pred, std::size_t samples,
                                    std::uint64_t seed);

bool semantic_ring(const Element& x);
bool semantic_ring_ac1(const Element& x);

/// Formulas used for round-trip testing of the printer and parser.
std::vector<std::string> formula_corpus();
/// Malformed inputs paired with the column where the error must be reported.
std::vector<std::pair<std::string, std::size_t>> malformed_corpus();

}  // namespace valgroth
