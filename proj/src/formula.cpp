#include "valgroth/formula.hpp"

#include <cctype>
#include <regex>

#include "valgroth/power_classes.hpp"
#include "valgroth/sampler.hpp"

namespace valgroth {

SyntaxError::SyntaxError(std::size_t column, const std::string& message)
    : Error("column " + std::to_string(column) + ": " + message), column_(column), detail_(message) {}

// ---------------------------------------------------------------------------
// Constructors

TermPtr make_int(std::uint64_t v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Int;
  t->value = v;
  return t;
}

TermPtr make_name(std::string n) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Name;
  t->name = std::move(n);
  return t;
}

TermPtr make_unary(Term::Kind k, TermPtr a) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->args = {std::move(a)};
  return t;
}

TermPtr make_binary(Term::Kind k, TermPtr a, TermPtr b) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->args = {std::move(a), std::move(b)};
  return t;
}

TermPtr make_pow(TermPtr base, std::uint64_t e) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Pow;
  t->value = e;
  t->args = {std::move(base)};
  return t;
}

std::string cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Eq: return "=";
    case Cmp::Ne: return "!=";
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

namespace {

std::shared_ptr<Formula> node(Formula::Kind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

}  // namespace

FormulaPtr make_and(std::vector<FormulaPtr> cs) {
  if (cs.size() == 1) return cs.front();
  auto f = node(Formula::Kind::And);
  f->children = std::move(cs);
  return f;
}

FormulaPtr make_or(std::vector<FormulaPtr> cs) {
  if (cs.size() == 1) return cs.front();
  auto f = node(Formula::Kind::Or);
  f->children = std::move(cs);
  return f;
}

FormulaPtr make_not(FormulaPtr c) {
  auto f = node(Formula::Kind::Not);
  f->children = {std::move(c)};
  return f;
}

FormulaPtr make_power_class(std::uint32_t n, TermPtr t) {
  if (n < 2) throw DomainError("power class index must be at least 2");
  auto f = node(Formula::Kind::PowerClass);
  f->n = n;
  f->lhs = std::move(t);
  return f;
}

FormulaPtr make_val_cmp(TermPtr a, Cmp c, TermPtr b) {
  auto f = node(Formula::Kind::ValCmp);
  f->lhs = std::move(a);
  f->cmp = c;
  f->rhs = std::move(b);
  return f;
}

FormulaPtr make_ac_eq(TermPtr a, std::uint64_t residue) {
  auto f = node(Formula::Kind::AcEq);
  f->lhs = std::move(a);
  f->residue = residue;
  return f;
}

FormulaPtr make_term_eq(TermPtr a, TermPtr b) {
  auto f = node(Formula::Kind::TermEq);
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Int, Ident, LParen, RParen, Plus, Minus, Star, Slash, Caret, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Bang, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

std::string tok_name(Tok t) {
  switch (t) {
    case Tok::Int: return "integer";
    case Tok::Ident: return "name";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::And: return "'&&'";
    case Tok::Or: return "'||'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), col});
      i = j;
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "&&") out.push_back({Tok::And, two, col});
    else if (two == "||") out.push_back({Tok::Or, two, col});
    else if (two == "!=") out.push_back({Tok::Ne, two, col});
    else if (two == "<=") out.push_back({Tok::Le, two, col});
    else if (two == ">=") out.push_back({Tok::Ge, two, col});
    if (!out.empty() && out.back().column == col) {
      i += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '=': k = Tok::Eq; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '!': k = Tok::Bang; break;
      default: throw SyntaxError(col, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), col});
    ++i;
  }
  out.push_back({Tok::End, "", s.size() + 1});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

const std::regex kPowerClassName("P([0-9]+)");
const std::regex kLayerName("t([1-9][0-9]*)");

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : toks_(lex(text)), sig_(sig) {}

  FormulaPtr whole_formula() {
    FormulaPtr f = disjunction();
    expect(Tok::End);
    return f;
  }

  TermPtr whole_term() {
    TermPtr t = sum();
    expect(Tok::End);
    return t;
  }

 private:
  std::vector<Token> toks_;
  const Signature& sig_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* s) const { return at(Tok::Ident) && peek().text == s; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw SyntaxError(t.column, what + ", found " + (t.kind == Tok::End ? tok_name(t.kind) : "'" + t.text + "'"));
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail(peek(), "expected " + tok_name(k));
    return take();
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> cs = {conjunction()};
    while (at(Tok::Or)) {
      take();
      cs.push_back(conjunction());
    }
    return make_or(std::move(cs));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> cs = {negation()};
    while (at(Tok::And)) {
      take();
      cs.push_back(negation());
    }
    return make_and(std::move(cs));
  }

  FormulaPtr negation() {
    if (at(Tok::Bang)) {
      take();
      return make_not(negation());
    }
    if (at_ident("true") || at_ident("false")) {
      bool v = take().text == "true";
      return node(v ? Formula::Kind::True : Formula::Kind::False);
    }
    if (at(Tok::LParen)) {
      // either a parenthesised formula or an atom whose first term is parenthesised
      const std::size_t save = pos_;
      try {
        take();
        FormulaPtr f = disjunction();
        expect(Tok::RParen);
        return f;
      } catch (const SyntaxError& first) {
        pos_ = save;
        try {
          return atom();
        } catch (const SyntaxError& second) {
          if (second.column() >= first.column()) throw;
          throw first;
        }
      }
    }
    return atom();
  }

  FormulaPtr atom() {
    std::smatch m;
    if (at(Tok::Ident) && peek(1).kind == Tok::LParen) {
      const Token& head = peek();
      if (std::regex_match(head.text, m, kPowerClassName)) {
        take();
        unsigned long n = 0;
        try {
          n = std::stoul(m[1].str());
        } catch (const std::exception&) {
          n = 0;
        }
        if (n < 2 || n > 1000000) throw SyntaxError(head.column, "power class index must be at least 2 in " + head.text);
        expect(Tok::LParen);
        TermPtr t = sum();
        expect(Tok::RParen);
        return make_power_class(static_cast<std::uint32_t>(n), t);
      }
      if (head.text == "v") return valuation_atom();
      if (head.text == "ac") {
        take();
        expect(Tok::LParen);
        TermPtr t = sum();
        expect(Tok::RParen);
        expect(Tok::Eq);
        const Token& lit = expect(Tok::Int);
        return make_ac_eq(t, to_uint(lit));
      }
    }
    TermPtr a = sum();
    if (at(Tok::Eq) || at(Tok::Ne)) {
      bool ne = take().kind == Tok::Ne;
      TermPtr b = sum();
      auto f = std::const_pointer_cast<Formula>(make_term_eq(a, b));
      f->cmp = ne ? Cmp::Ne : Cmp::Eq;
      return f;
    }
    fail(peek(), "expected '=' or '!=' after a term");
  }

  FormulaPtr valuation_atom() {
    take();  // v
    expect(Tok::LParen);
    TermPtr a = sum();
    expect(Tok::RParen);
    Cmp c;
    switch (peek().kind) {
      case Tok::Eq: c = Cmp::Eq; break;
      case Tok::Ne: c = Cmp::Ne; break;
      case Tok::Lt: c = Cmp::Lt; break;
      case Tok::Le: c = Cmp::Le; break;
      case Tok::Gt: c = Cmp::Gt; break;
      case Tok::Ge: c = Cmp::Ge; break;
      default: fail(peek(), "expected a comparison after v(...)");
    }
    take();
    if (at(Tok::Int)) {
      const Token& z = take();
      if (z.text != "0") throw SyntaxError(z.column, "valuations compare only with 0 or v(...)");
      return make_val_cmp(a, c, nullptr);
    }
    if (!at_ident("v") || peek(1).kind != Tok::LParen) fail(peek(), "expected 0 or v(...)");
    take();
    expect(Tok::LParen);
    TermPtr b = sum();
    expect(Tok::RParen);
    return make_val_cmp(a, c, b);
  }

  static std::uint64_t to_uint(const Token& t) {
    try {
      std::size_t used = 0;
      auto v = std::stoull(t.text, &used);
      if (used == t.text.size() && v <= static_cast<unsigned long long>(INT64_MAX)) return v;
    } catch (const std::exception&) {
    }
    throw SyntaxError(t.column, "integer literal out of range: " + t.text);
  }

  TermPtr sum() {
    TermPtr t = product();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Term::Kind k = take().kind == Tok::Plus ? Term::Kind::Add : Term::Kind::Sub;
      t = make_binary(k, t, product());
    }
    return t;
  }

  TermPtr product() {
    TermPtr t = signed_factor();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Term::Kind k = take().kind == Tok::Star ? Term::Kind::Mul : Term::Kind::Div;
      t = make_binary(k, t, signed_factor());
    }
    return t;
  }

  TermPtr signed_factor() {
    if (at(Tok::Minus)) {
      take();
      return make_unary(Term::Kind::Neg, signed_factor());
    }
    return power();
  }

  TermPtr power() {
    TermPtr base = primary();
    if (at(Tok::Caret)) {
      take();
      const Token& e = expect(Tok::Int);
      return make_pow(base, to_uint(e));
    }
    return base;
  }

  TermPtr primary() {
    if (at(Tok::Int)) return make_int(to_uint(take()));
    if (at(Tok::LParen)) {
      take();
      TermPtr t = sum();
      expect(Tok::RParen);
      return t;
    }
    if (at(Tok::Ident)) {
      const Token& id = take();
      if (id.text == "v" || id.text == "ac" || std::regex_match(id.text, kPowerClassName)) expect(Tok::LParen);
      check_name(id);
      return make_name(id.text);
    }
    fail(peek(), "expected a term");
  }

  void check_name(const Token& id) const {
    const std::string& s = id.text;
    for (const auto& v : sig_.variables)
      if (v == s) return;
    const Field* K = sig_.field.get();
    std::smatch m;
    if (std::regex_match(s, m, kLayerName)) {
      if (!K) return;
      std::size_t i = std::stoul(m[1].str());
      if (i <= K->depth()) return;
      throw SyntaxError(id.column, "no layer variable " + s + " in " + K->descriptor().display_name());
    }
    if (s == "p") {
      if (!K || K->base().kind() == BaseKind::PadicQ) return;
      throw SyntaxError(id.column, "the constant p exists only over Q_p");
    }
    if (s == "g") {
      if (!K || K->base().kind() == BaseKind::FiniteField) return;
      throw SyntaxError(id.column, "the generator g exists only over F_q");
    }
    throw SyntaxError(id.column, "unknown variable '" + s + "'");
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Signature& sig) { return Parser(text, sig).whole_formula(); }
TermPtr parse_term(const std::string& text, const Signature& sig) { return Parser(text, sig).whole_term(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int term_level(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Add:
    case Term::Kind::Sub: return 1;
    case Term::Kind::Mul:
    case Term::Kind::Div: return 2;
    case Term::Kind::Neg: return 3;
    case Term::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string term_at(const TermPtr& t, int min_level) {
  std::string s = print(t);
  return term_level(t) < min_level ? "(" + s + ")" : s;
}

int formula_level(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Not: return 3;
    default: return 4;
  }
}

std::string formula_at(const FormulaPtr& f, int min_level) {
  std::string s = print(f);
  return formula_level(f) < min_level ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Int: return std::to_string(t->value);
    case Term::Kind::Name: return t->name;
    case Term::Kind::Neg: return "-" + term_at(t->args[0], 3);
    case Term::Kind::Add: return term_at(t->args[0], 1) + " + " + term_at(t->args[1], 2);
    case Term::Kind::Sub: return term_at(t->args[0], 1) + " - " + term_at(t->args[1], 2);
    case Term::Kind::Mul: return term_at(t->args[0], 2) + "*" + term_at(t->args[1], 3);
    case Term::Kind::Div: return term_at(t->args[0], 2) + "/" + term_at(t->args[1], 3);
    case Term::Kind::Pow: return term_at(t->args[0], 5) + "^" + std::to_string(t->value);
  }
  return "?";
}

std::string print(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Not: {
      const FormulaPtr& c = f->children[0];
      // an equation under '!' reads badly without parentheses
      if (c->kind == Formula::Kind::TermEq) return "!(" + print(c) + ")";
      return "!" + formula_at(c, 3);
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const bool conj = f->kind == Formula::Kind::And;
      std::string s;
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) s += conj ? " && " : " || ";
        s += formula_at(f->children[i], conj ? 3 : 2);
      }
      return s;
    }
    case Formula::Kind::PowerClass: return "P" + std::to_string(f->n) + "(" + print(f->lhs) + ")";
    case Formula::Kind::ValCmp:
      return "v(" + print(f->lhs) + ") " + cmp_text(f->cmp) + " " + (f->rhs ? "v(" + print(f->rhs) + ")" : "0");
    case Formula::Kind::AcEq: return "ac(" + print(f->lhs) + ") = " + std::to_string(f->residue);
    case Formula::Kind::TermEq: return print(f->lhs) + " " + cmp_text(f->cmp) + " " + print(f->rhs);
  }
  return "?";
}

namespace {

bool same_term(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same_term(a->args[i], b->args[i])) return false;
  return true;
}

}  // namespace

bool same_formula(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind || a->n != b->n || a->cmp != b->cmp || a->residue != b->residue) return false;
  if (!same_term(a->lhs, b->lhs) || !same_term(a->rhs, b->rhs)) return false;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!same_formula(a->children[i], b->children[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation

Element evaluate_term(const TermPtr& t, const Field& K, const Environment& env) {
  switch (t->kind) {
    case Term::Kind::Int: return K.from_int(static_cast<std::int64_t>(t->value));
    case Term::Kind::Name: {
      auto it = env.find(t->name);
      if (it != env.end()) return it->second;
      std::smatch m;
      if (std::regex_match(t->name, m, kLayerName)) return K.variable(std::stoul(m[1].str()));
      if (t->name == "p") return K.prime_constant();
      if (t->name == "g") return K.field_generator();
      throw DomainError("unbound variable '" + t->name + "'");
    }
    case Term::Kind::Neg: return -evaluate_term(t->args[0], K, env);
    case Term::Kind::Add: return evaluate_term(t->args[0], K, env) + evaluate_term(t->args[1], K, env);
    case Term::Kind::Sub: return evaluate_term(t->args[0], K, env) - evaluate_term(t->args[1], K, env);
    case Term::Kind::Mul: return evaluate_term(t->args[0], K, env) * evaluate_term(t->args[1], K, env);
    case Term::Kind::Div: {
      Element d = evaluate_term(t->args[1], K, env);
      if (d.is_zero()) throw DomainError("division by zero in " + print(t));
      return evaluate_term(t->args[0], K, env) / d;
    }
    case Term::Kind::Pow: return evaluate_term(t->args[0], K, env).pow(static_cast<std::int64_t>(t->value));
  }
  throw DomainError("malformed term");
}

namespace {

ValTuple value_of(const Element& x) {
  if (x.is_zero()) return ValTuple::infinity(x.field().value_arity());
  return x.valuation();
}

bool compare(std::strong_ordering o, Cmp c) {
  switch (c) {
    case Cmp::Eq: return o == 0;
    case Cmp::Ne: return o != 0;
    case Cmp::Lt: return o < 0;
    case Cmp::Le: return o <= 0;
    case Cmp::Gt: return o > 0;
    case Cmp::Ge: return o >= 0;
  }
  return false;
}

bool evaluate_atom(const FormulaPtr& f, const Field& K, const Environment& env) {
  switch (f->kind) {
    case Formula::Kind::PowerClass: {
      Element x = evaluate_term(f->lhs, K, env);
      if (x.is_zero()) return false;
      return is_nth_power(x, f->n);
    }
    case Formula::Kind::ValCmp: {
      ValTuple a = value_of(evaluate_term(f->lhs, K, env));
      ValTuple b = f->rhs ? value_of(evaluate_term(f->rhs, K, env)) : ValTuple::zero(K.value_arity());
      return compare(lex_compare(a, b), f->cmp);
    }
    case Formula::Kind::AcEq: {
      Element x = evaluate_term(f->lhs, K, env);
      return x.angular_component() == K.base().residue_from_rational(mpq_class(static_cast<unsigned long>(f->residue)));
    }
    case Formula::Kind::TermEq: {
      Element d = evaluate_term(f->lhs, K, env) - evaluate_term(f->rhs, K, env);
      bool zero = d.is_zero();
      if (!zero && d.is_zero_at_precision()) throw PrecisionError("equation undecided at the available precision");
      return f->cmp == Cmp::Eq ? zero : !zero;
    }
    default: break;
  }
  throw DomainError("not an atom");
}

void trace_into(const FormulaPtr& f, const Field& K, const Environment& env, std::vector<std::pair<std::string, bool>>& out) {
  switch (f->kind) {
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
      for (const auto& c : f->children) trace_into(c, K, env, out);
      return;
    case Formula::Kind::True:
    case Formula::Kind::False: return;
    default: out.emplace_back(print(f), evaluate_atom(f, K, env));
  }
}

}  // namespace

bool evaluate(const FormulaPtr& f, const Field& K, const Environment& env) {
  switch (f->kind) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Not: return !evaluate(f->children[0], K, env);
    case Formula::Kind::And:
      for (const auto& c : f->children)
        if (!evaluate(c, K, env)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f->children)
        if (evaluate(c, K, env)) return true;
      return false;
    default: return evaluate_atom(f, K, env);
  }
}

std::vector<std::pair<std::string, bool>> atom_trace(const FormulaPtr& f, const Field& K, const Environment& env) {
  std::vector<std::pair<std::string, bool>> out;
  trace_into(f, K, env, out);
  return out;
}

bool DefinableSet::contains(const Element& x) const { return evaluate(formula, *field, {{variable, x}}); }

// ---------------------------------------------------------------------------
// Builtin definitions of R and R1

namespace {

TermPtr monomial_term(const std::vector<std::pair<std::string, std::int64_t>>& factors) {
  TermPtr t;
  for (const auto& [name, e] : factors) {
    if (e == 0) continue;
    TermPtr f = e == 1 ? make_name(name) : make_pow(make_name(name), static_cast<std::uint64_t>(e));
    t = t ? make_binary(Term::Kind::Mul, t, f) : f;
  }
  return t;
}

}  // namespace

BuiltinSets builtin_sets(std::shared_ptr<const Field> field) {
  const Field& K = *field;
  const BaseField& B = K.base();
  if (B.kind() == BaseKind::RealModel)
    throw DomainError(
        "no ring-language definition of R is claimed over the real model; use v(x) >= 0 and ac(x) = 1 "
        "as primitives instead");
  if (!K.has_nontrivial_valuation()) throw DomainError("R is the whole field for a trivially valued field");

  BuiltinSets out;
  const std::uint32_t residue_char = K.residue_characteristic();
  const std::uint32_t n = residue_char == 2 ? 3 : 2;
  const TermPtr x = make_name("x");

  // constants of positive valuation: t_k, ..., t1, then p; the last one is the uniformizer
  std::vector<std::string> consts;
  for (std::size_t i = K.depth(); i >= 1; --i) consts.push_back("t" + std::to_string(i));
  if (B.kind() == BaseKind::PadicQ) consts.push_back("p");

  std::vector<FormulaPtr> conj;
  for (const auto& c : consts) {
    TermPtr inner = make_binary(Term::Kind::Mul, make_name(c), make_pow(x, n));
    conj.push_back(make_power_class(n, make_binary(Term::Kind::Add, make_int(1), inner)));
  }
  FormulaPtr ring = make_and(conj);

  // R1: union of m * P_{q-1} over monomials m with exponents in [0, q-2]
  const std::uint32_t q = B.kind() == BaseKind::PadicQ ? residue_char : B.order();
  const std::uint32_t e = q - 1;
  FormulaPtr union_part;
  if (e < 2) {
    union_part = make_not(make_term_eq(x, make_int(0)));
  } else {
    std::vector<std::string> names;  // p first, then t_k .. t1
    if (B.kind() == BaseKind::PadicQ) names.push_back("p");
    for (std::size_t i = K.depth(); i >= 1; --i) names.push_back("t" + std::to_string(i));
    std::vector<FormulaPtr> disj;
    std::vector<std::int64_t> ex(names.size(), 0);
    for (;;) {
      std::vector<std::pair<std::string, std::int64_t>> fs;
      for (std::size_t i = 0; i < names.size(); ++i) fs.emplace_back(names[i], ex[i]);
      TermPtr m = monomial_term(fs);
      disj.push_back(make_power_class(e, m ? make_binary(Term::Kind::Mul, m, x) : x));
      std::size_t i = names.size();
      while (i > 0 && ex[i - 1] == static_cast<std::int64_t>(e) - 1) ex[--i] = 0;
      if (i == 0) break;
      ++ex[i - 1];
    }
    union_part = make_or(disj);
    if (B.kind() == BaseKind::FiniteField && q != residue_char)
      out.notes.push_back("residue field F_" + std::to_string(q) + " is not prime: R1 uses P_" + std::to_string(e) +
                          " and exponents 0.." + std::to_string(e - 1));
  }
  FormulaPtr r1 = make_and({ring, union_part});
  if (n == 3) out.notes.push_back("residue characteristic 2: cube variant of the R formula");

  out.ring = DefinableSet{ring, "x", field};
  out.ring_ac1 = DefinableSet{r1, "x", field};
  return out;
}

// ---------------------------------------------------------------------------
// Mutations and equivalence checking

std::string mutation_name(FormulaMutation m) {
  return m == FormulaMutation::DropLastConjunct ? "drop-last-conjunct" : "drop-first-disjunct";
}

FormulaMutation parse_formula_mutation(const std::string& s) {
  if (s == "drop-last-conjunct") return FormulaMutation::DropLastConjunct;
  if (s == "drop-first-disjunct") return FormulaMutation::DropFirstDisjunct;
  throw DomainError("unknown formula mutation '" + s + "'");
}

namespace {

// drop-first-disjunct: the first Or found in a depth-first walk loses its first child
FormulaPtr drop_disjunct(const FormulaPtr& f, bool& done) {
  if (done) return f;
  if (f->kind == Formula::Kind::Or) {
    done = true;
    return make_or(std::vector<FormulaPtr>(f->children.begin() + 1, f->children.end()));
  }
  if (f->children.empty()) return f;
  auto g = std::make_shared<Formula>(*f);
  for (auto& c : g->children) c = drop_disjunct(c, done);
  return g;
}

}  // namespace

FormulaPtr mutate(const FormulaPtr& f, FormulaMutation m) {
  if (m == FormulaMutation::DropLastConjunct) {
    if (f->kind != Formula::Kind::And) return node(Formula::Kind::True);
    return make_and(std::vector<FormulaPtr>(f->children.begin(), f->children.end() - 1));
  }
  bool done = false;
  FormulaPtr g = drop_disjunct(f, done);
  if (!done) throw DomainError("formula has no disjunction to mutate");
  return g;
}

bool semantic_ring(const Element& x) { return x.is_zero() || x.in_valuation_ring(); }

bool semantic_ring_ac1(const Element& x) {
  if (x.is_zero() || !x.in_valuation_ring()) return false;
  return x.angular_component() == x.field().base().residue_one();
}

nlohmann::json EquivalenceReport::to_json() const {
  nlohmann::json ce = nlohmann::json::array();
  for (const auto& c : counterexamples)
    ce.push_back({{"index", c.index}, {"element", c.element}, {"formula", c.formula_value}, {"predicate", c.predicate_value}});
  return {{"samples", samples}, {"skipped", skipped}, {"boundary_cases", boundary_cases}, {"counterexamples", ce}};
}

EquivalenceReport check_equivalence(const DefinableSet& set, const SemanticPredicate& pred, std::size_t samples,
                                    std::uint64_t seed) {
  SamplerSpec spec;
  spec.strategy = SampleStrategy::Boundary;
  Sampler sampler(set.field, spec, seed);
  EquivalenceReport rep;
  rep.boundary_cases = sampler.boundary_cases().size();
  for (std::size_t i = 0; i < samples; ++i) {
    Element x = sampler.next();
    ++rep.samples;
    try {
      bool a = set.contains(x);
      bool b = pred(x);
      if (a != b) rep.counterexamples.push_back({i, x.to_string(), a, b});
    } catch (const PrecisionError&) {
      ++rep.skipped;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Corpora

std::vector<std::string> formula_corpus() {
  return {
      "P2(1 + t1*x^2) && P2(1 + p*x^2)",
      "P3(1 + t1*x^3) && P3(1 + p*x^3)",
      "P2(1 + t2*x^2) && P2(1 + t1*x^2)",
      "P3(1 + t2*x^3) && P3(1 + t1*x^3)",
      "v(x) >= 0",
      "v(x) > 0 || x = 0",
      "ac(x) = 1",
      "v(x) >= 0 && ac(x) = 1",
      "!(x = 0)",
      "x != 0",
      "v(x) <= v(t1*x)",
      "v(x - 1) > 0",
      "P2(x) || P2(p*x) || P2(t1*x) || P2(p*t1*x)",
      "(P2(x) || P2(t1*x)) && v(x) = 0",
      "!P2(x) && !P3(x)",
      "(x + 1)^2 = x^2 + 2*x + 1",
      "-x^2 = -(x^2)",
      "(-x)^2 = x^2",
      "x/(1 + t1) != 0",
      "P12(x^12)",
      "true && !false",
      "v(x^2) = v(x*x) && ac(x^3) = 1",
      "(v(x) < 0 || P2(x)) || ac(x) = 2",
      "x - (1 - t1) = 0",
      "P4(t2^3*t1*x - 2)",
      "!!P5(g*x)",
  };
}

std::vector<std::pair<std::string, std::size_t>> malformed_corpus() {
  return {
      {"P1(x)", 1},
      {"P2(x", 5},
      {"v(x) >= 1", 9},
      {"x +", 4},
      {"ac(x) = y", 9},
      {"P2(y)", 4},
      {"x && P2(x)", 3},
      {"v(x) >= 0 &&", 13},
      {"P2(1 + t1*x^2) $ P2(x)", 16},
      {"(x = 0", 7},
      {"x^y = 1", 3},
      {"v x) = 0", 3},
  };
}

}  // namespace valgroth
