#include <doctest.h>

#include "valgroth/arith.hpp"
#include "valgroth/galois_field.hpp"
#include "valgroth/real_number.hpp"
#include "valgroth/value_tuple.hpp"

using namespace valgroth;

TEST_CASE("lexicographic order on value tuples") {
  CHECK(ValTuple{0, 1} < ValTuple{1, -5});
  CHECK(ValTuple{0, 0} == ValTuple{0, 0});
  CHECK(ValTuple::infinity(2) > ValTuple{9, 9});
  CHECK_THROWS_AS((void)(ValTuple{1} < ValTuple{1, 2}), DomainError);
  CHECK(ValTuple::min_positive(3) == ValTuple{0, 0, 1});
  CHECK(ValTuple{0, 0, 1}.is_positive());
  CHECK(ValTuple{-1, 5}.is_negative());
  CHECK((ValTuple{1, 2} + ValTuple{3, -4}) == ValTuple{4, -2});
  CHECK((ValTuple{1, 2} + ValTuple::infinity(2)).is_infinite());
  CHECK(ValTuple{-3, 4}.divided_by(2) == ValTuple{-2, 2});
  CHECK(ValTuple{2, 4}.divisible_by(2));
  CHECK(ValTuple{-2, 1}.to_string() == "(-2,1)");
}

TEST_CASE("every strictly positive tuple dominates the minimal positive one") {
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      ValTuple v{a, b};
      if (v.is_positive()) CHECK(v >= ValTuple::min_positive(2));
    }
}

TEST_CASE("integer helpers") {
  CHECK(arith::padic_valuation(mpz_class(54), 3) == 3);
  CHECK(arith::padic_valuation(mpq_class(2, 9), 3) == -2);
  CHECK(arith::reduce_unit(mpq_class(1, 2), 3, 2) == 5);  // 2*5 = 10 = 1 mod 9
  CHECK(arith::reduce_unit(mpq_class(-1), 5, 3) == 124);
  CHECK(arith::primes_up_to(20) == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13, 17, 19});
  mpz_class r;
  CHECK(arith::exact_root(mpz_class(343), 3, r));
  CHECK(r == 7);
  CHECK_FALSE(arith::exact_root(mpz_class(344), 3, r));
  CHECK(arith::binomial_root_coefficient(2, 1) == mpq_class(1, 2));
  CHECK(arith::binomial_root_coefficient(2, 2) == mpq_class(-1, 8));
  std::uint32_t p = 0, l = 0;
  CHECK(arith::prime_power(9, p, l));
  CHECK((p == 3 && l == 2));
  CHECK_FALSE(arith::prime_power(12, p, l));
}

TEST_CASE("finite field arithmetic is a field") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 8u, 9u}) {
    std::uint32_t p = 0, l = 0;
    arith::prime_power(q, p, l);
    GaloisField F(p, l);
    for (GaloisField::Elem a = 0; a < q; ++a) {
      CHECK(F.add(a, F.neg(a)) == 0);
      if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
      CHECK(F.pow(F.frobenius_root(a), p) == a);
      for (GaloisField::Elem b = 0; b < q; ++b) {
        CHECK(F.mul(a, b) == F.mul(b, a));
        for (GaloisField::Elem c = 0; c < q; ++c) CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
      }
    }
  }
}

TEST_CASE("real model signs and roots") {
  RealNumber s2 = RealNumber(2).sqrt();
  RealNumber s3 = RealNumber(3).sqrt();
  CHECK(s2 * s2 == RealNumber(2));
  CHECK((s2 - RealNumber(mpq_class(141, 100))).sign() == 1);
  CHECK((s2 - RealNumber(mpq_class(142, 100))).sign() == -1);
  CHECK((s2 + s3 - RealNumber(mpq_class(314, 100))).sign() == 1);   // 3.1462...
  CHECK((s2 + s3 - RealNumber(mpq_class(3147, 1000))).sign() == -1);
  RealNumber x = RealNumber(1) + s2 - s3;
  CHECK(x * x.inverse() == RealNumber(1));
  CHECK(RealNumber(mpq_class(8, 9)).sqrt() == RealNumber::sqrt_of(2, mpq_class(2, 3)));
  CHECK_THROWS_AS(RealNumber(-1).sqrt(), DomainError);
  CHECK_THROWS_AS(s2.sqrt(), RepresentationError);
}
