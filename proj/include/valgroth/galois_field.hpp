#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace valgroth {

/// Finite field GF(p^l) with table-driven multiplication.
///
/// Elements are encoded as integers 0..q-1: the base-p digits of the code are
/// the coefficients of a polynomial in the generator X modulo a primitive
/// polynomial, lowest degree first.  Code 0 is zero and code 1 is one; the
/// prime subfield is {0,...,p-1} with its usual arithmetic.
class GaloisField {
 public:
  using Elem = std::uint32_t;

  GaloisField(std::uint32_t p, std::uint32_t degree);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t order() const { return q_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::int64_t e) const;
  /// Image of an integer in the prime field.
  Elem from_int(std::int64_t n) const;
  /// Unique a with a^p = x.
  Elem frobenius_root(Elem x) const;
  Elem generator() const { return exp_.size() > 1 ? exp_[1] : 1; }

  /// Minimal polynomial coefficients (monic, lowest degree first).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  std::string to_string(Elem a) const;

 private:
  std::uint32_t p_;
  std::uint32_t degree_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;

  Elem mul_by_x(Elem a) const;
};

}  // namespace valgroth
