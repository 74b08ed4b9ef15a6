#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace valgroth {

/// Exact real number of the form sum_d c_d * sqrt(d), with rational c_d and
/// distinct squarefree d >= 1.  This is the field Q(sqrt 2, sqrt 3, ...),
/// enough to hold canonical square roots of positive rationals.
///
/// Signs are decided exactly by recursion on the largest prime involved:
/// sign(a + b sqrt P) follows from sign(a), sign(b) and sign(a^2 - P b^2).
class RealNumber {
 public:
  RealNumber() = default;
  RealNumber(const mpq_class& q);  // NOLINT(google-explicit-constructor)
  RealNumber(long n) : RealNumber(mpq_class(n)) {}  // NOLINT

  static RealNumber sqrt_of(std::uint64_t squarefree, const mpq_class& coefficient);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1); }
  mpq_class rational_value() const;  // throws unless is_rational()
  int sign() const;

  friend RealNumber operator+(const RealNumber& a, const RealNumber& b);
  friend RealNumber operator-(const RealNumber& a, const RealNumber& b);
  friend RealNumber operator*(const RealNumber& a, const RealNumber& b);
  RealNumber operator-() const;
  RealNumber inverse() const;
  friend bool operator==(const RealNumber& a, const RealNumber& b) { return a.terms_ == b.terms_; }

  /// Square root of a non-negative rational; throws RepresentationError otherwise.
  RealNumber sqrt() const;

  const std::vector<std::pair<std::uint64_t, mpq_class>>& terms() const { return terms_; }
  std::string to_string() const;

 private:
  std::vector<std::pair<std::uint64_t, mpq_class>> terms_;  // sorted by d
  void add_term(std::uint64_t d, const mpq_class& c);
};

}  // namespace valgroth
