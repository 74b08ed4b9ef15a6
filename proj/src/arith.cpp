#include "valgroth/arith.hpp"

#include "valgroth/errors.hpp"

namespace valgroth::arith {

std::int64_t padic_valuation(const mpz_class& n, std::uint32_t p) {
  if (n == 0) throw DomainError("valuation of zero");
  // most values are units; skip the allocation for them
  if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) return 0;
  mpz_class tmp;
  mpz_class prime = p;
  return static_cast<std::int64_t>(mpz_remove(tmp.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

std::int64_t padic_valuation(const mpq_class& q, std::uint32_t p) {
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

std::int64_t int_valuation(std::int64_t n, std::uint32_t p) {
  if (n == 0) throw DomainError("valuation of zero");
  std::int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

mpz_class ipow(std::uint32_t base, std::int64_t exp) {
  if (exp < 0) throw DomainError("negative integer exponent");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, static_cast<unsigned long>(exp));
  return r;
}

mpq_class qpow(const mpq_class& base, std::int64_t exp) {
  if (exp < 0) {
    if (base == 0) throw DomainError("zero to a negative power");
    mpq_class inv = 1 / base;
    return qpow(inv, -exp);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exp));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exp));
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

mpz_class reduce_unit(const mpq_class& u, std::uint32_t p, std::int64_t m) {
  mpz_class modulus = ipow(p, m);
  mpz_class den_inv;
  if (mpz_invert(den_inv.get_mpz_t(), u.get_den_mpz_t(), modulus.get_mpz_t()) == 0)
    throw DomainError("denominator not invertible modulo p^m");
  mpz_class r = (u.get_num() * den_inv) % modulus;
  if (r < 0) r += modulus;
  return r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    auto t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = 2; n <= bound; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool exact_root(const mpz_class& value, std::uint32_t n, mpz_class& root) {
  if (value < 0) return false;
  return mpz_root(root.get_mpz_t(), value.get_mpz_t(), n) != 0;
}

mpq_class binomial_root_coefficient(std::uint32_t n, std::uint32_t j) {
  mpq_class alpha(1, n);
  mpq_class c = 1;
  for (std::uint32_t i = 0; i < j; ++i) {
    c *= (alpha - i);
    c /= (i + 1);
  }
  c.canonicalize();
  return c;
}

bool prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& l) {
  if (q < 2) return false;
  for (std::uint32_t d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      l = 0;
      while (q % d == 0) {
        q /= d;
        ++l;
      }
      return q == 1;
    }
  }
  return false;
}

}  // namespace valgroth::arith
