#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valgroth/field.hpp"

namespace valgroth {

/// x = term(exponents, coef) * unit with unit = 1 + (terms of positive layer exponent).
struct LeadingForm {
  std::vector<std::int64_t> exponents;  // one per layer, outermost first
  Coef coef;
  Element unit;
};

LeadingForm leading_form(const Element& x);

/// Membership of x in P_n, the n-th powers of K^x.
bool is_nth_power(const Element& x, std::uint32_t n);

/// Canonical n-th root: the root whose residue key (angular component, then the
/// unit part mod 4 over Q_2) is least.  Exact when the root is a polynomial.
Element nth_root(const Element& x, std::uint32_t n);

/// Canonical n-th root of a base-field coefficient (exact or approximate).
Coef base_nth_root(const BaseField& base, const Coef& c, std::uint32_t n);
bool base_is_nth_power(const BaseField& base, const Coef& c, std::uint32_t n);

/// Ordering key of the residue of a root; roots of the same element differ in it.
std::vector<std::uint64_t> root_key(const Element& x, std::uint32_t n);
std::vector<std::uint64_t> root_key(const BaseField& base, const Coef& c, std::uint32_t n);

/// A count that may be infinite.
struct Index {
  std::optional<std::uint64_t> value;  // nullopt: infinite
  bool infinite() const { return !value.has_value(); }
  std::string to_string() const { return value ? std::to_string(*value) : "inf"; }
};

std::uint64_t roots_of_unity_count(const FieldDescriptor& d, std::uint32_t n);
Index power_index(const FieldDescriptor& d, std::uint32_t n);

struct PowerClassReport {
  std::uint32_t n = 0;
  std::uint64_t r_n = 0;
  Index s_n;
  std::uint64_t lambda = 1;
  bool fallback = false;
  std::string fallback_reason;
  std::optional<std::string> capability;
};

PowerClassReport lambda_report(const FieldDescriptor& d, std::uint32_t n);

struct SubgroupH {
  std::uint64_t generator = 0;  // H = generator * Z
  std::vector<std::pair<std::uint32_t, std::uint64_t>> witnesses;  // (n, lambda_n - 1)
  std::uint32_t prime_bound = 97;
  std::optional<std::string> note;
};

SubgroupH subgroup_H(const FieldDescriptor& d, std::uint32_t prime_bound = 97);

nlohmann::json to_json(const PowerClassReport& r);
nlohmann::json to_json(const SubgroupH& h);

/// Unit classes U/U^n of the valuation ring together with the n-th roots of
/// unity, for a fixed tower and exponent.  Class representatives are least in
/// the residue enumeration order.
class PowerClasses {
 public:
  PowerClasses(std::shared_ptr<const Field> field, std::uint32_t n);

  const Field& field() const { return *field_; }
  std::uint32_t n() const { return n_; }
  std::size_t unit_class_count() const { return unit_reps_.size(); }
  /// Base-field unit representatives, one per class of U/U^n.
  const std::vector<Coef>& unit_representatives() const { return unit_reps_; }
  std::size_t unit_class_of(const Coef& unit) const;

  /// s_n coset representatives of K^x / P_n: unit reps times t^beta, beta in [0,n)^d.
  std::vector<Element> coset_representatives() const;
  std::size_t index_count() const;
  std::size_t class_of(const Element& x) const;

  /// The r_n roots of unity, 1 first, in residue order.
  const std::vector<Element>& roots_of_unity() const { return roots_; }
  /// j with x = roots_of_unity()[j] * (canonical root of x^n).
  std::size_t root_of_unity_index(const Element& x) const;
  /// Same index, read off the leading coefficient of z: z = zeta_j * canonical root of z^n.
  std::size_t root_index_of(const Element& z) const;

  /// Leading coefficient split as p^v * unit over Q_p; the coefficient itself otherwise.
  Coef unit_of(const Coef& c) const;

 private:
  std::shared_ptr<const Field> field_;
  std::uint32_t n_;
  // Residue model of U/U^n: units modulo `modulus_` (Q_p) or codes of F_q.
  std::uint64_t modulus_ = 0;
  std::vector<std::uint64_t> power_set_;
  std::map<std::uint64_t, std::size_t> key_to_class_;
  std::vector<Coef> unit_reps_;
  std::vector<Element> roots_;
  std::vector<std::vector<std::uint64_t>> root_keys_;

  std::uint64_t class_key(std::uint64_t code) const;
  std::uint64_t code_of(const Coef& unit) const;
};

/// Exhaustive counts over the base field only (Q_p modulo p^7, F_q in full).
std::uint64_t brute_roots_of_unity(const FieldDescriptor& base, std::uint32_t n);
std::uint64_t brute_power_index(const FieldDescriptor& base, std::uint32_t n);

}  // namespace valgroth
