#include "valgroth/real_number.hpp"

#include <algorithm>
#include <numeric>

#include "valgroth/arith.hpp"
#include "valgroth/errors.hpp"

namespace valgroth {

RealNumber::RealNumber(const mpq_class& q) {
  if (q != 0) add_term(1, q);
}

RealNumber RealNumber::sqrt_of(std::uint64_t squarefree, const mpq_class& coefficient) {
  RealNumber r;
  r.add_term(squarefree, coefficient);
  return r;
}

void RealNumber::add_term(std::uint64_t d, const mpq_class& value) {
  if (value == 0) return;
  mpq_class c = value;
  c.canonicalize();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), d, [](const auto& t, std::uint64_t key) { return t.first < key; });
  if (it != terms_.end() && it->first == d) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {d, c});
  }
}

mpq_class RealNumber::rational_value() const {
  if (!is_rational()) throw RepresentationError("irrational real number " + to_string());
  return terms_.empty() ? mpq_class(0) : terms_[0].second;
}

RealNumber operator+(const RealNumber& a, const RealNumber& b) {
  RealNumber r = a;
  for (const auto& [d, c] : b.terms_) r.add_term(d, c);
  return r;
}

RealNumber RealNumber::operator-() const {
  RealNumber r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

RealNumber operator-(const RealNumber& a, const RealNumber& b) { return a + (-b); }

RealNumber operator*(const RealNumber& a, const RealNumber& b) {
  RealNumber r;
  for (const auto& [da, ca] : a.terms_) {
    for (const auto& [db, cb] : b.terms_) {
      std::uint64_t g = std::gcd(da, db);
      r.add_term((da / g) * (db / g), ca * cb * g);
    }
  }
  return r;
}

namespace {

std::uint64_t largest_prime(const RealNumber& x) {
  std::uint64_t best = 1;
  for (const auto& [d, c] : x.terms()) {
    auto f = arith::prime_factors(d);
    if (!f.empty()) best = std::max(best, f.back());
  }
  return best;
}

// x = a + b*sqrt(P) with a, b free of sqrt(P).
void split(const RealNumber& x, std::uint64_t P, RealNumber& a, RealNumber& b) {
  a = RealNumber();
  b = RealNumber();
  for (const auto& [d, c] : x.terms()) {
    if (d % P == 0)
      b = b + RealNumber::sqrt_of(d / P, c);
    else
      a = a + RealNumber::sqrt_of(d, c);
  }
}

}  // namespace

int RealNumber::sign() const {
  if (terms_.empty()) return 0;
  if (is_rational()) return sgn(terms_[0].second);
  std::uint64_t P = largest_prime(*this);
  RealNumber a, b;
  split(*this, P, a, b);
  int sa = a.sign();
  int sb = b.sign();
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
  RealNumber disc = a * a - RealNumber(mpq_class(static_cast<long>(P))) * b * b;
  return sa * disc.sign();
}

RealNumber RealNumber::inverse() const {
  if (terms_.empty()) throw DomainError("inverse of zero");
  if (is_rational()) return RealNumber(1 / terms_[0].second);
  std::uint64_t P = largest_prime(*this);
  RealNumber a, b;
  split(*this, P, a, b);
  RealNumber conj = a - b * sqrt_of(P, 1);
  RealNumber norm = a * a - RealNumber(mpq_class(static_cast<long>(P))) * b * b;
  return conj * norm.inverse();
}

RealNumber RealNumber::sqrt() const {
  if (!is_rational()) throw RepresentationError("square root of irrational " + to_string() + " not representable");
  mpq_class q = rational_value();
  if (q < 0) throw DomainError("square root of a negative number");
  if (q == 0) return RealNumber();
  // sqrt(n/d) = sqrt(n*d)/d; split n*d = s^2 * f with f squarefree
  mpz_class nd = q.get_num() * q.get_den();
  mpz_class s = 1;
  std::uint64_t f = 1;
  if (!nd.fits_ulong_p()) throw RepresentationError("square root radicand too large");
  std::uint64_t m = nd.get_ui();
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    while (m % (p * p) == 0) {
      m /= p * p;
      s *= static_cast<unsigned long>(p);
    }
    if (m % p == 0) {
      m /= p;
      f *= p;
    }
  }
  f *= m;
  mpq_class coeff(s, q.get_den());
  coeff.canonicalize();
  return sqrt_of(f, coeff);
}

std::string RealNumber::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& [d, c] = terms_[i];
    std::string cs = c.get_str();
    if (i > 0) out += " + ";
    if (d == 1)
      out += cs;
    else
      out += cs + "*sqrt(" + std::to_string(d) + ")";
  }
  return out;
}

}  // namespace valgroth
