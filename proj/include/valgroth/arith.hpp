#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <vector>

namespace valgroth::arith {

inline constexpr std::int64_t kInfinitePrecision = std::numeric_limits<std::int64_t>::max();

/// p-adic valuation of a nonzero integer / rational.
std::int64_t padic_valuation(const mpz_class& n, std::uint32_t p);
std::int64_t padic_valuation(const mpq_class& q, std::uint32_t p);

/// Valuation of an ordinary machine integer (n != 0).
std::int64_t int_valuation(std::int64_t n, std::uint32_t p);

mpz_class ipow(std::uint32_t base, std::int64_t exp);
mpq_class qpow(const mpq_class& base, std::int64_t exp);

/// Reduce a p-adic unit rational u modulo p^m, result in [0, p^m).
mpz_class reduce_unit(const mpq_class& u, std::uint32_t p, std::int64_t m);

std::int64_t gcd(std::int64_t a, std::int64_t b);
bool is_prime(std::uint64_t n);
std::vector<std::uint32_t> primes_up_to(std::uint32_t bound);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Exact integer n-th root of a non-negative integer if it exists.
bool exact_root(const mpz_class& value, std::uint32_t n, mpz_class& root);

/// Generalised binomial coefficient binom(1/n, j).
mpq_class binomial_root_coefficient(std::uint32_t n, std::uint32_t j);

/// Integer prime power test: q = p^l with l >= 1.
bool prime_power(std::uint32_t q, std::uint32_t& p, std::uint32_t& l);

}  // namespace valgroth::arith
