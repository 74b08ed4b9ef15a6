#include <doctest.h>

#include "valgroth/errors.hpp"
#include "valgroth/field.hpp"

using namespace valgroth;

namespace {

std::shared_ptr<const Field> tower(BaseKind base, std::uint32_t pq, std::size_t k) {
  FieldDescriptor d;
  d.base = base;
  if (base == BaseKind::FiniteField)
    d.q = pq;
  else
    d.p = pq;
  for (std::size_t i = 1; i <= k; ++i) d.layers.push_back("t" + std::to_string(i));
  d.apply_default_capabilities();
  return Field::create(d);
}

GaloisField::Elem ff_res(const Residue& r) { return std::get<GaloisField::Elem>(r); }

}  // namespace

TEST_CASE("polynomial arithmetic is exact") {
  auto K = tower(BaseKind::PadicQ, 3, 1);
  auto t = K->variable(1);
  auto one = K->one();
  auto prod = (one + t) * (one - t);
  CHECK(prod.identical(one - t * t));
  CHECK(prod.is_exact());
  CHECK(prod.to_string() == "1 - t1^2");
  CHECK(((one + t) * (one - t) / (one + t)).identical(one - t));
}

TEST_CASE("series inverse truncates at the cutoff") {
  auto K = tower(BaseKind::PadicQ, 3, 1);
  auto t = K->variable(1);
  auto x = K->one() - t;
  auto y = x.inverse();
  CHECK_FALSE(y.is_exact());
  REQUIRE(y.node().bound.has_value());
  CHECK(*y.node().bound == 16);
  CHECK(y.node().terms.size() == 16);
  CHECK((x * y).equal_at_precision(K->one()));
  CHECK_THROWS_AS(K->zero().inverse(), DomainError);
}

TEST_CASE("monomial inverses are exact") {
  auto K = tower(BaseKind::PadicQ, 3, 2);
  auto m = K->from_int(6) * K->variable(1).pow(2) * K->variable(2).pow(-3);
  auto inv = m.inverse();
  CHECK(inv.is_exact());
  CHECK((m * inv).identical(K->one()));
}

TEST_CASE("valuations in a p-adic tower") {
  auto K = tower(BaseKind::PadicQ, 3, 1);
  auto t = K->variable(1);
  CHECK(t.valuation() == ValTuple{1, 0});
  CHECK(K->one().valuation() == ValTuple{0, 0});
  CHECK((K->from_int(3) * t.pow(-2)).valuation() == ValTuple{-2, 1});
  CHECK(K->zero().valuation().is_infinite());
  CHECK(K->uniformizer().valuation() == ValTuple{0, 1});
}

TEST_CASE("angular component and residue") {
  auto K = tower(BaseKind::PadicQ, 3, 1);
  auto t = K->variable(1);
  CHECK(ff_res(K->one().angular_component()) == 1);
  CHECK(ff_res((K->from_int(6) * t * t).angular_component()) == 2);
  CHECK(ff_res((K->one() + t).residue()) == 1);
  CHECK(ff_res(t.residue()) == 0);
  CHECK(ff_res(K->from_int(4).residue()) == 1);
  CHECK_THROWS_AS(t.inverse().residue(), DomainError);
  CHECK(ff_res(K->uniformizer().angular_component()) == 1);
}

TEST_CASE("uniformizer per base") {
  CHECK(tower(BaseKind::FiniteField, 3, 2)->uniformizer().valuation() == ValTuple{0, 1});
  CHECK(tower(BaseKind::RealModel, 0, 1)->uniformizer().to_string() == "t1");
  CHECK(tower(BaseKind::PadicQ, 5, 0)->uniformizer().to_string() == "5");
  CHECK_THROWS_AS(tower(BaseKind::FiniteField, 4, 0)->uniformizer(), DomainError);
}

TEST_CASE("characteristic p powers use Frobenius") {
  auto K = tower(BaseKind::FiniteField, 3, 2);
  auto x = K->one() + K->variable(1) + K->variable(2);
  auto cube = x.pow(3);
  CHECK(cube.identical(K->one() + K->variable(1).pow(3) + K->variable(2).pow(3)));
  CHECK(x.pow(6).identical(cube * cube));
  CHECK(K->wrap(K->node_frobenius_root(cube.node(), 2)).identical(x));
}

TEST_CASE("precision-bounded values refuse to guess") {
  auto K = tower(BaseKind::PadicQ, 3, 1);
  auto t = K->variable(1);
  auto y = (K->one() - t).inverse();
  auto tail = y - (K->one() - t).inverse();
  CHECK(tail.is_zero_at_precision());
  CHECK_FALSE(tail.is_zero());
  CHECK_THROWS_AS(tail.valuation(), PrecisionError);
  auto approx = K->from_coef(K->base().approx(mpq_class(0), 4));
  CHECK_THROWS_AS(approx.valuation(), PrecisionError);
}

TEST_CASE("finite field display") {
  auto K = tower(BaseKind::FiniteField, 4, 1);
  auto g = K->field_generator();
  CHECK((g * K->variable(1)).to_string() == "g*t1");
  CHECK((K->one() + g).to_string() == "1 + g");
}
