#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "valgroth/base_field.hpp"
#include "valgroth/value_tuple.hpp"

namespace valgroth {

/// Configuration of an iterated Laurent series tower L((t1))...((tk)).
struct FieldDescriptor {
  std::string name;
  BaseKind base = BaseKind::PadicQ;
  std::uint32_t p = 3;  // prime for Q_p, characteristic for F_q
  std::uint32_t q = 0;  // field order for F_q
  std::int64_t padic_precision = 7;  // relative digits produced by p-adic root extraction
  std::vector<std::string> layers;   // t1 (innermost) first
  std::int64_t cutoff = 16;          // exponent steps kept per layer by truncating operations
  /// n -> citation; key 0 means "every n".  An absent entry means no root capability.
  std::map<std::uint32_t, std::string> root_capability;

  std::size_t depth() const { return layers.size(); }
  std::optional<std::string> root_capability_for(std::uint32_t n) const;
  /// Default capability table: asserted for every n over Q_p and the real model.
  void apply_default_capabilities();
  std::string display_name() const;
};

/// One level of the recursive representation.  At depth 0 only `coef` is
/// meaningful; at depth d > 0 the node is a Laurent series in t_d whose
/// coefficients are depth d-1 nodes, known modulo t_d^bound when `bound` is set.
struct Node {
  Coef coef;
  std::vector<std::pair<std::int64_t, Node>> terms;  // ascending exponents
  std::optional<std::int64_t> bound;
};

class Field;

/// Exact (or precision-bounded) element of a tower.  Immutable value type.
class Element {
 public:
  Element() = default;
  Element(std::shared_ptr<const Field> field, Node node) : field_(std::move(field)), node_(std::move(node)) {}

  const Field& field() const { return *field_; }
  const std::shared_ptr<const Field>& field_ptr() const { return field_; }
  const Node& node() const { return node_; }

  bool is_zero() const;                // exactly zero
  bool is_zero_at_precision() const;   // zero up to the known digits/terms
  bool is_exact() const;

  ValTuple valuation() const;
  Residue angular_component() const;
  Residue residue() const;
  bool in_valuation_ring() const { return valuation() >= ValTuple::zero(valuation_arity()); }
  std::size_t valuation_arity() const;

  Element inverse() const;
  Element pow(std::int64_t n) const;
  /// Exact quotient when the division terminates, truncated series otherwise.
  Element divided_by(const Element& d) const;

  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator/(const Element& a, const Element& b) { return a.divided_by(b); }
  Element operator-() const;

  /// Difference is zero up to the common known precision.
  bool equal_at_precision(const Element& other) const;
  /// Structural identity (same terms, same coefficients, same bounds).
  bool identical(const Element& other) const;

  std::string to_string() const;

 private:
  std::shared_ptr<const Field> field_;
  Node node_;
};

/// A configured tower together with its arithmetic.
class Field : public std::enable_shared_from_this<Field> {
 public:
  static std::shared_ptr<const Field> create(FieldDescriptor descriptor);

  const FieldDescriptor& descriptor() const { return descriptor_; }
  const BaseField& base() const { return base_; }
  std::size_t depth() const { return descriptor_.depth(); }
  /// Number of coordinates of the value group: one per layer, plus one for Q_p.
  std::size_t value_arity() const;
  bool has_nontrivial_valuation() const { return value_arity() > 0; }
  std::uint32_t characteristic() const { return base_.characteristic(); }
  std::uint32_t residue_characteristic() const { return base_.residue_characteristic(); }

  Element zero() const;
  Element one() const;
  Element from_int(std::int64_t n) const;
  Element from_rational(const mpq_class& q) const;
  Element from_coef(const Coef& c) const;
  /// t_i, 1-based, i = 1 is the innermost variable.
  Element variable(std::size_t i) const;
  /// The element p of a Q_p tower.
  Element prime_constant() const;
  /// Generator g of F_q over F_p.
  Element field_generator() const;
  /// Element of minimal strictly positive valuation, with ac = 1.
  Element uniformizer() const;
  /// Monomial t^gamma (times p^r over Q_p) with angular component 1.
  Element monomial(const ValTuple& gamma) const;
  /// Monomial with exponent vector e (one entry per layer, outermost first).
  Element term(const std::vector<std::int64_t>& exponents, const Coef& c) const;

  std::string residue_to_string(const Residue& r) const { return base_.residue_to_string(r); }
  bool residue_equal(const Residue& a, const Residue& b) const { return a == b; }

  // Node-level algorithms, exposed for the power-class module.
  Node node_add(const Node& a, const Node& b, std::size_t d) const;
  Node node_neg(const Node& a, std::size_t d) const;
  Node node_mul(const Node& a, const Node& b, std::size_t d) const;
  Node node_inverse(const Node& a, std::size_t d) const;
  std::optional<Node> node_exact_divide(const Node& y, const Node& x, std::size_t d) const;
  Node node_scale(const Node& a, const Coef& c, std::size_t d) const;
  Node node_zero(std::size_t d) const;
  Node node_constant(const Coef& c, std::size_t d) const;
  Node node_frobenius(const Node& a, std::size_t d) const;
  Node node_frobenius_root(const Node& a, std::size_t d) const;
  bool node_exact_zero(const Node& a, std::size_t d) const;
  bool node_zero_at_precision(const Node& a, std::size_t d) const;
  bool node_exact(const Node& a, std::size_t d) const;
  bool node_identical(const Node& a, const Node& b, std::size_t d) const;
  ValTuple node_valuation(const Node& a, std::size_t d) const;
  const Coef& node_leading_coef(const Node& a, std::size_t d) const;
  std::string node_to_string(const Node& a, std::size_t d) const;

  Element wrap(Node n) const { return Element(shared_from_this(), std::move(n)); }

 private:
  explicit Field(FieldDescriptor descriptor);
  FieldDescriptor descriptor_;
  BaseField base_;
};

}  // namespace valgroth
