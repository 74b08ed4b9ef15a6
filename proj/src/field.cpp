#include "valgroth/field.hpp"

#include <algorithm>

#include "valgroth/errors.hpp"

namespace valgroth {

// ---------------------------------------------------------------------------
// FieldDescriptor

std::optional<std::string> FieldDescriptor::root_capability_for(std::uint32_t n) const {
  if (auto it = root_capability.find(n); it != root_capability.end()) return it->second;
  if (auto it = root_capability.find(0); it != root_capability.end()) return it->second;
  return std::nullopt;
}

void FieldDescriptor::apply_default_capabilities() {
  root_capability.clear();
  if (base == BaseKind::PadicQ)
    root_capability[0] = "n-th roots are ring-definable over p-adic towers (Hensel lifting of the unit part)";
  else if (base == BaseKind::RealModel)
    root_capability[0] = "n-th roots are ring-definable over real Laurent towers (positive root for even n)";
}

std::string FieldDescriptor::display_name() const {
  if (!name.empty()) return name;
  std::string s;
  switch (base) {
    case BaseKind::PadicQ:
      s = "Q" + std::to_string(p);
      break;
    case BaseKind::FiniteField:
      s = "F" + std::to_string(q);
      break;
    case BaseKind::RealModel:
      s = "R";
      break;
  }
  for (const auto& l : layers) s += "((" + l + "))";
  return s;
}

// ---------------------------------------------------------------------------
// Field construction and constants

namespace {

FieldDescriptor normalized(FieldDescriptor d) {
  if (d.base == BaseKind::FiniteField) {
    std::uint32_t p = 0, l = 0;
    if (!arith::prime_power(d.q, p, l)) throw ConfigError("finite field order must be a prime power: " + std::to_string(d.q));
    d.p = p;
  }
  if (d.base == BaseKind::PadicQ && !arith::is_prime(d.p)) throw ConfigError("p must be prime: " + std::to_string(d.p));
  if (d.cutoff < 1) throw ConfigError("cutoff must be at least 1");
  return d;
}

std::uint32_t extension_degree(const FieldDescriptor& d) {
  if (d.base != BaseKind::FiniteField) return 1;
  std::uint32_t p = 0, l = 0;
  arith::prime_power(d.q, p, l);
  return l;
}

}  // namespace

Field::Field(FieldDescriptor descriptor)
    : descriptor_(normalized(std::move(descriptor))),
      base_(descriptor_.base, descriptor_.p, extension_degree(descriptor_), descriptor_.padic_precision) {}

std::shared_ptr<const Field> Field::create(FieldDescriptor descriptor) {
  return std::shared_ptr<const Field>(new Field(std::move(descriptor)));
}

std::size_t Field::value_arity() const { return depth() + (base_.has_valuation_coordinate() ? 1 : 0); }

Node Field::node_zero(std::size_t d) const {
  Node n;
  if (d == 0) n.coef = base_.zero();
  return n;
}

Node Field::node_constant(const Coef& c, std::size_t d) const {
  if (d == 0) {
    Node n;
    n.coef = c;
    return n;
  }
  Node n;
  if (!base_.is_exact_zero(c)) n.terms.emplace_back(0, node_constant(c, d - 1));
  return n;
}

Element Field::zero() const { return wrap(node_zero(depth())); }
Element Field::one() const { return from_int(1); }
Element Field::from_int(std::int64_t n) const { return wrap(node_constant(base_.from_int(n), depth())); }
Element Field::from_rational(const mpq_class& q) const { return wrap(node_constant(base_.from_rational(q), depth())); }
Element Field::from_coef(const Coef& c) const { return wrap(node_constant(c, depth())); }

Element Field::term(const std::vector<std::int64_t>& exponents, const Coef& c) const {
  if (exponents.size() != depth()) throw DomainError("exponent vector has wrong length");
  Node n = node_constant(c, 0);
  if (base_.is_exact_zero(c)) return zero();
  for (std::size_t level = 1; level <= depth(); ++level) {
    Node outer;
    outer.terms.emplace_back(exponents[depth() - level], std::move(n));
    n = std::move(outer);
  }
  return wrap(std::move(n));
}

Element Field::variable(std::size_t i) const {
  if (i < 1 || i > depth()) throw DomainError("no layer variable t" + std::to_string(i));
  std::vector<std::int64_t> e(depth(), 0);
  e[depth() - i] = 1;
  return term(e, base_.one());
}

Element Field::prime_constant() const {
  if (base_.kind() != BaseKind::PadicQ) throw DomainError("the constant p exists only in Q_p towers");
  return from_int(descriptor_.p);
}

Element Field::field_generator() const {
  if (base_.kind() != BaseKind::FiniteField) throw DomainError("generator g exists only in F_q towers");
  return from_coef(base_.gf().generator());
}

Element Field::monomial(const ValTuple& gamma) const {
  if (gamma.arity() != value_arity()) throw DomainError("monomial exponent of wrong arity");
  Coef c = base_.one();
  if (base_.has_valuation_coordinate())
    c = PadicNumber{arith::qpow(mpq_class(descriptor_.p), gamma[depth()]), arith::kInfinitePrecision};
  std::vector<std::int64_t> e(gamma.coords().begin(), gamma.coords().begin() + static_cast<std::ptrdiff_t>(depth()));
  return term(e, c);
}

Element Field::uniformizer() const {
  if (!has_nontrivial_valuation()) throw DomainError("trivially valued field has no uniformizer");
  return monomial(ValTuple::min_positive(value_arity()));
}

// ---------------------------------------------------------------------------
// Node predicates

bool Field::node_exact_zero(const Node& a, std::size_t d) const {
  if (d == 0) return base_.is_exact_zero(a.coef);
  return a.terms.empty() && !a.bound;
}

bool Field::node_zero_at_precision(const Node& a, std::size_t d) const {
  if (d == 0) return base_.is_zero_at_precision(a.coef);
  return std::all_of(a.terms.begin(), a.terms.end(), [&](const auto& t) { return node_zero_at_precision(t.second, d - 1); });
}

bool Field::node_exact(const Node& a, std::size_t d) const {
  if (d == 0) return base_.is_exact(a.coef);
  if (a.bound) return false;
  return std::all_of(a.terms.begin(), a.terms.end(), [&](const auto& t) { return node_exact(t.second, d - 1); });
}

bool Field::node_identical(const Node& a, const Node& b, std::size_t d) const {
  if (d == 0) return a.coef == b.coef;
  if (a.bound != b.bound || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].first != b.terms[i].first) return false;
    if (!node_identical(a.terms[i].second, b.terms[i].second, d - 1)) return false;
  }
  return true;
}

ValTuple Field::node_valuation(const Node& a, std::size_t d) const {
  std::vector<std::int64_t> coords;
  const Node* cur = &a;
  for (std::size_t level = d; level > 0; --level) {
    if (cur->terms.empty()) {
      if (cur->bound) throw PrecisionError("valuation undetermined: no known term below the precision bound");
      return ValTuple::infinity(value_arity());
    }
    const auto& [e, inner] = cur->terms.front();
    if (node_zero_at_precision(inner, level - 1))
      throw PrecisionError("valuation undetermined: leading coefficient known only to be O(...)");
    coords.push_back(e);
    cur = &inner;
  }
  if (base_.has_valuation_coordinate()) {
    if (base_.is_exact_zero(cur->coef)) return ValTuple::infinity(value_arity());
    coords.push_back(base_.valuation(cur->coef));
  } else if (base_.is_exact_zero(cur->coef)) {
    return ValTuple::infinity(value_arity());
  }
  return ValTuple(std::move(coords));
}

const Coef& Field::node_leading_coef(const Node& a, std::size_t d) const {
  const Node* cur = &a;
  for (std::size_t level = d; level > 0; --level) {
    if (cur->terms.empty()) throw DomainError("leading coefficient of zero");
    cur = &cur->terms.front().second;
  }
  return cur->coef;
}

// ---------------------------------------------------------------------------
// Node arithmetic

namespace {

std::optional<std::int64_t> min_bound(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

}  // namespace

Node Field::node_add(const Node& a, const Node& b, std::size_t d) const {
  if (d == 0) {
    Node n;
    n.coef = base_.add(a.coef, b.coef);
    return n;
  }
  Node r;
  r.bound = min_bound(a.bound, b.bound);
  auto below = [&](std::int64_t e) { return !r.bound || e < *r.bound; };
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      if (below(a.terms[i].first)) r.terms.push_back(a.terms[i]);
      ++i;
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      if (below(b.terms[j].first)) r.terms.push_back(b.terms[j]);
      ++j;
    } else {
      std::int64_t e = a.terms[i].first;
      if (below(e)) {
        Node s = node_add(a.terms[i].second, b.terms[j].second, d - 1);
        if (!node_exact_zero(s, d - 1)) r.terms.emplace_back(e, std::move(s));
      }
      ++i;
      ++j;
    }
  }
  return r;
}

Node Field::node_neg(const Node& a, std::size_t d) const {
  if (d == 0) {
    Node n;
    n.coef = base_.neg(a.coef);
    return n;
  }
  Node r;
  r.bound = a.bound;
  r.terms.reserve(a.terms.size());
  for (const auto& [e, v] : a.terms) r.terms.emplace_back(e, node_neg(v, d - 1));
  return r;
}

Node Field::node_scale(const Node& a, const Coef& c, std::size_t d) const { return node_mul(a, node_constant(c, d), d); }

Node Field::node_mul(const Node& a, const Node& b, std::size_t d) const {
  if (d == 0) {
    Node n;
    n.coef = base_.mul(a.coef, b.coef);
    return n;
  }
  if (node_exact_zero(a, d) || node_exact_zero(b, d)) return node_zero(d);
  auto low = [](const Node& x) { return x.terms.empty() ? *x.bound : x.terms.front().first; };
  std::optional<std::int64_t> bound;
  if (a.bound) bound = min_bound(bound, *a.bound + low(b));
  if (b.bound) bound = min_bound(bound, *b.bound + low(a));

  std::map<std::int64_t, Node> acc;
  for (const auto& [ea, va] : a.terms) {
    for (const auto& [eb, vb] : b.terms) {
      std::int64_t e = ea + eb;
      if (bound && e >= *bound) continue;
      Node prod = node_mul(va, vb, d - 1);
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(e, std::move(prod));
      else
        it->second = node_add(it->second, prod, d - 1);
    }
  }
  Node r;
  r.bound = bound;
  for (auto& [e, v] : acc)
    if (!node_exact_zero(v, d - 1)) r.terms.emplace_back(e, std::move(v));
  return r;
}

Node Field::node_inverse(const Node& a, std::size_t d) const {
  if (d == 0) {
    Node n;
    n.coef = base_.inv(a.coef);
    return n;
  }
  if (node_exact_zero(a, d)) throw DomainError("inverse of zero");
  if (a.terms.empty()) throw PrecisionError("inverse of an element known only to be O(...)");
  const auto& [s, lead] = a.terms.front();
  if (node_zero_at_precision(lead, d - 1)) throw PrecisionError("inverse: leading coefficient undetermined");
  Node lead_inv = node_inverse(lead, d - 1);

  Node r;
  if (a.terms.size() == 1 && !a.bound) {
    r.terms.emplace_back(-s, std::move(lead_inv));
    return r;
  }
  std::int64_t limit = -s + descriptor_.cutoff;
  if (a.bound) limit = std::min(limit, *a.bound - 2 * s);
  r.bound = limit;

  std::map<std::int64_t, const Node*> coeffs;
  for (const auto& [e, v] : a.terms) coeffs.emplace(e - s, &v);

  std::vector<Node> b;
  for (std::int64_t m = 0; -s + m < limit; ++m) {
    if (m == 0) {
      b.push_back(lead_inv);
      continue;
    }
    Node sum = node_zero(d - 1);
    for (auto it = coeffs.upper_bound(0); it != coeffs.end() && it->first <= m; ++it)
      sum = node_add(sum, node_mul(*it->second, b[static_cast<std::size_t>(m - it->first)], d - 1), d - 1);
    b.push_back(node_neg(node_mul(lead_inv, sum, d - 1), d - 1));
  }
  for (std::size_t m = 0; m < b.size(); ++m)
    if (!node_exact_zero(b[m], d - 1)) r.terms.emplace_back(-s + static_cast<std::int64_t>(m), std::move(b[m]));
  return r;
}

std::optional<Node> Field::node_exact_divide(const Node& y, const Node& x, std::size_t d) const {
  if (node_exact_zero(x, d)) throw DomainError("division by zero");
  if (!node_exact(y, d) || !node_exact(x, d)) return std::nullopt;
  if (d == 0) {
    Node n;
    n.coef = base_.mul(y.coef, base_.inv(x.coef));
    return n;
  }
  if (node_exact_zero(y, d)) return node_zero(d);
  const auto& [s, xs] = x.terms.front();
  std::int64_t max_q = y.terms.back().first - x.terms.back().first;
  Node rem = y;
  Node quotient;
  for (int guard = 0; guard < 100000; ++guard) {
    if (node_exact_zero(rem, d)) return quotient;
    const auto& [e, re] = rem.terms.front();
    std::int64_t qe = e - s;
    if (qe > max_q) return std::nullopt;
    auto qc = node_exact_divide(re, xs, d - 1);
    if (!qc) return std::nullopt;
    Node qterm;
    qterm.terms.emplace_back(qe, *qc);
    quotient = node_add(quotient, qterm, d);
    rem = node_add(rem, node_neg(node_mul(qterm, x, d), d), d);
  }
  return std::nullopt;
}

Node Field::node_frobenius(const Node& a, std::size_t d) const {
  std::uint32_t p = characteristic();
  if (p == 0) throw DomainError("Frobenius needs positive characteristic");
  if (d == 0) {
    Node n;
    n.coef = base_.pow(a.coef, p);
    return n;
  }
  Node r;
  if (a.bound) r.bound = *a.bound * p;
  for (const auto& [e, v] : a.terms) r.terms.emplace_back(e * p, node_frobenius(v, d - 1));
  return r;
}

Node Field::node_frobenius_root(const Node& a, std::size_t d) const {
  std::int64_t p = characteristic();
  if (p == 0) throw DomainError("Frobenius root needs positive characteristic");
  if (d == 0) {
    Node n;
    n.coef = base_.frobenius_root(a.coef);
    return n;
  }
  Node r;
  if (a.bound) {
    std::int64_t b = *a.bound;
    std::int64_t q = b / p;
    if (b % p != 0 && b > 0) ++q;
    r.bound = q;
  }
  for (const auto& [e, v] : a.terms) {
    if (e % p != 0) throw DomainError("not a p-th power: exponent " + std::to_string(e));
    r.terms.emplace_back(e / p, node_frobenius_root(v, d - 1));
  }
  return r;
}

std::string Field::node_to_string(const Node& a, std::size_t d) const {
  if (d == 0) return base_.to_string(a.coef);
  const std::string& var = descriptor_.layers[d - 1];
  auto mono = [&](std::int64_t e) { return e == 1 ? var : var + "^" + std::to_string(e); };
  std::vector<std::string> pieces;
  for (const auto& [e, v] : a.terms) {
    std::string inner = node_to_string(v, d - 1);
    bool compound = inner.find(" + ") != std::string::npos || inner.find(" - ") != std::string::npos ||
                    inner.find("O(") != std::string::npos;
    if (e == 0)
      pieces.push_back(compound && (a.terms.size() > 1 || a.bound) ? "(" + inner + ")" : inner);
    else if (inner == "1")
      pieces.push_back(mono(e));
    else if (inner == "-1")
      pieces.push_back("-" + mono(e));
    else if (compound)
      pieces.push_back("(" + inner + ")*" + mono(e));
    else
      pieces.push_back(inner + "*" + mono(e));
  }
  if (a.bound) pieces.push_back("O(" + mono(*a.bound) + ")");
  if (pieces.empty()) return "0";
  std::string out = pieces[0];
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i][0] == '-')
      out += " - " + pieces[i].substr(1);
    else
      out += " + " + pieces[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Element

bool Element::is_zero() const { return field_->node_exact_zero(node_, field_->depth()); }
bool Element::is_zero_at_precision() const { return field_->node_zero_at_precision(node_, field_->depth()); }
bool Element::is_exact() const { return field_->node_exact(node_, field_->depth()); }
std::size_t Element::valuation_arity() const { return field_->value_arity(); }

ValTuple Element::valuation() const { return field_->node_valuation(node_, field_->depth()); }

Residue Element::angular_component() const {
  const auto& base = field_->base();
  if (is_zero()) return base.residue_zero();
  (void)valuation();  // throws when the leading term is undetermined
  return base.angular(field_->node_leading_coef(node_, field_->depth()));
}

Residue Element::residue() const {
  ValTuple v = valuation();
  if (v.is_infinite()) return field_->base().residue_zero();
  if (v.is_negative()) throw DomainError("residue of an element outside the valuation ring: v = " + v.to_string());
  if (v.is_positive()) return field_->base().residue_zero();
  return angular_component();
}

namespace {

void require_same_field(const Element& a, const Element& b) {
  if (a.field_ptr() != b.field_ptr() && a.field().descriptor().display_name() != b.field().descriptor().display_name())
    throw DomainError("elements belong to different towers");
}

}  // namespace

Element operator+(const Element& a, const Element& b) {
  require_same_field(a, b);
  return a.field().wrap(a.field().node_add(a.node_, b.node_, a.field().depth()));
}

Element operator-(const Element& a, const Element& b) { return a + (-b); }

Element Element::operator-() const { return field_->wrap(field_->node_neg(node_, field_->depth())); }

Element operator*(const Element& a, const Element& b) {
  require_same_field(a, b);
  return a.field().wrap(a.field().node_mul(a.node_, b.node_, a.field().depth()));
}

Element Element::inverse() const { return field_->wrap(field_->node_inverse(node_, field_->depth())); }

Element Element::divided_by(const Element& d) const {
  require_same_field(*this, d);
  if (auto q = field_->node_exact_divide(node_, d.node_, field_->depth())) return field_->wrap(std::move(*q));
  return *this * d.inverse();
}

Element Element::pow(std::int64_t n) const {
  if (n < 0) return inverse().pow(-n);
  std::uint32_t p = field_->characteristic();
  if (p != 0 && n > 0 && n % p == 0) return field_->wrap(field_->node_frobenius(pow(n / p).node_, field_->depth()));
  Element result = field_->one();
  Element base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

bool Element::equal_at_precision(const Element& other) const { return (*this - other).is_zero_at_precision(); }

bool Element::identical(const Element& other) const { return field_->node_identical(node_, other.node_, field_->depth()); }

std::string Element::to_string() const {
  std::string s = field_->node_to_string(node_, field_->depth());
  // drop one enclosing pair of parentheses if it spans the whole string
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
      if (depth == 0 && i + 1 < s.size()) return s;
    }
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace valgroth
