#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "valgroth/arith.hpp"
#include "valgroth/galois_field.hpp"
#include "valgroth/real_number.hpp"

namespace valgroth {

enum class BaseKind { PadicQ, FiniteField, RealModel };

/// p-adic number known modulo p^prec (prec == kInfinitePrecision: exact rational).
/// Approximate values are kept in the canonical form p^v * u, 0 <= u < p^(prec-v).
struct PadicNumber {
  mpq_class value;
  std::int64_t prec = arith::kInfinitePrecision;

  bool exact() const { return prec == arith::kInfinitePrecision; }
};

using Coef = std::variant<std::monostate, PadicNumber, GaloisField::Elem, RealNumber>;

/// Residue field element: GF(p) / GF(q) code, or a real number for the
/// ordered-rational model of R.
using Residue = std::variant<GaloisField::Elem, RealNumber>;

/// Arithmetic in the coefficient field L of a tower (Q_p, F_q or the real model).
class BaseField {
 public:
  BaseField(BaseKind kind, std::uint32_t p, std::uint32_t degree, std::int64_t padic_precision);

  BaseKind kind() const { return kind_; }
  std::uint32_t characteristic() const;  // 0 for Q_p and the real model
  std::uint32_t residue_characteristic() const { return p_; }  // 0 for the real model
  std::uint32_t order() const;  // q for F_q, 0 otherwise
  std::int64_t padic_precision() const { return padic_precision_; }
  const GaloisField& gf() const { return *gf_; }
  bool has_valuation_coordinate() const { return kind_ == BaseKind::PadicQ; }

  Coef zero() const;
  Coef one() const { return from_int(1); }
  Coef from_int(std::int64_t n) const;
  Coef from_rational(const mpq_class& q) const;
  Coef approx(const mpq_class& value, std::int64_t prec) const;  // Q_p only

  Coef add(const Coef& a, const Coef& b) const;
  Coef neg(const Coef& a) const;
  Coef sub(const Coef& a, const Coef& b) const { return add(a, neg(b)); }
  Coef mul(const Coef& a, const Coef& b) const;
  Coef inv(const Coef& a) const;
  Coef pow(const Coef& a, std::int64_t e) const;

  bool is_exact_zero(const Coef& a) const;
  bool is_exact(const Coef& a) const;
  /// Zero up to the known precision (exact zero, or O(p^k) with no digit known).
  bool is_zero_at_precision(const Coef& a) const;
  bool is_determinate_nonzero(const Coef& a) const { return !is_zero_at_precision(a); }

  /// p-adic valuation (Q_p only); requires a determinate nonzero value.
  std::int64_t valuation(const Coef& a) const;
  /// p-adic absolute precision (Q_p only).
  std::int64_t precision(const Coef& a) const;
  /// Angular component of a determinate nonzero coefficient.
  Residue angular(const Coef& a) const;
  /// Lift of a residue to a coefficient (Teichmuller-free: least integer representative).
  Coef lift(const Residue& r) const;
  /// For Q_p: unit part u mod p^digits as an integer; requires enough known digits.
  mpz_class unit_digits(const Coef& a, std::int64_t digits) const;

  Coef frobenius_root(const Coef& a) const;  // F_q only

  Residue residue_zero() const;
  Residue residue_one() const;
  Residue residue_mul(const Residue& a, const Residue& b) const;
  bool residue_is_zero(const Residue& a) const;
  std::string residue_to_string(const Residue& r) const;
  Residue residue_from_rational(const mpq_class& q) const;

  const PadicNumber& padic(const Coef& a) const { return std::get<PadicNumber>(a); }
  GaloisField::Elem ff(const Coef& a) const { return std::get<GaloisField::Elem>(a); }
  const RealNumber& real(const Coef& a) const { return std::get<RealNumber>(a); }

  /// Display form; parenthesised when it is not a single signed atom.
  std::string to_string(const Coef& a) const;

 private:
  BaseKind kind_;
  std::uint32_t p_;
  std::int64_t padic_precision_;
  std::optional<GaloisField> gf_;

  PadicNumber normalize(mpq_class value, std::int64_t prec) const;
};

bool operator==(const PadicNumber& a, const PadicNumber& b);

}  // namespace valgroth
