#include "valgroth/base_field.hpp"

#include "valgroth/errors.hpp"

namespace valgroth {

using arith::kInfinitePrecision;

namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kInfinitePrecision || b == kInfinitePrecision) return kInfinitePrecision;
  return a + b;
}

}  // namespace

bool operator==(const PadicNumber& a, const PadicNumber& b) { return a.prec == b.prec && a.value == b.value; }

BaseField::BaseField(BaseKind kind, std::uint32_t p, std::uint32_t degree, std::int64_t padic_precision)
    : kind_(kind), p_(p), padic_precision_(padic_precision) {
  switch (kind_) {
    case BaseKind::PadicQ:
      if (padic_precision_ < 1) throw ConfigError("p-adic precision must be positive");
      gf_.emplace(p, 1);
      break;
    case BaseKind::FiniteField:
      gf_.emplace(p, degree);
      break;
    case BaseKind::RealModel:
      p_ = 0;
      break;
  }
}

std::uint32_t BaseField::characteristic() const { return kind_ == BaseKind::FiniteField ? p_ : 0; }

std::uint32_t BaseField::order() const { return kind_ == BaseKind::FiniteField ? gf_->order() : 0; }

PadicNumber BaseField::normalize(mpq_class value, std::int64_t prec) const {
  value.canonicalize();
  if (prec == kInfinitePrecision) return {value, prec};
  if (value == 0) return {mpq_class(0), prec};
  std::int64_t v = arith::padic_valuation(value, p_);
  if (v >= prec) return {mpq_class(0), prec};
  mpq_class unit = value / arith::qpow(mpq_class(p_), v);
  mpz_class digits = arith::reduce_unit(unit, p_, prec - v);
  return {mpq_class(digits) * arith::qpow(mpq_class(p_), v), prec};
}

Coef BaseField::zero() const { return from_int(0); }

Coef BaseField::from_int(std::int64_t n) const {
  switch (kind_) {
    case BaseKind::PadicQ:
      return PadicNumber{mpq_class(static_cast<long>(n)), kInfinitePrecision};
    case BaseKind::FiniteField:
      return gf_->from_int(n);
    case BaseKind::RealModel:
      return RealNumber(mpq_class(static_cast<long>(n)));
  }
  return {};
}

Coef BaseField::from_rational(const mpq_class& q) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      mpq_class c = q;
      c.canonicalize();
      return PadicNumber{c, kInfinitePrecision};
    }
    case BaseKind::FiniteField: {
      mpz_class num = q.get_num() % p_;
      mpz_class den = q.get_den() % p_;
      if (den == 0) throw DomainError("rational " + q.get_str() + " has no image in characteristic " + std::to_string(p_));
      auto n = gf_->from_int(num.get_si());
      auto d = gf_->from_int(den.get_si());
      return gf_->div(n, d);
    }
    case BaseKind::RealModel:
      return RealNumber(q);
  }
  return {};
}

Coef BaseField::approx(const mpq_class& value, std::int64_t prec) const {
  if (kind_ != BaseKind::PadicQ) throw DomainError("approximate coefficients exist only over Q_p");
  return normalize(value, prec);
}

Coef BaseField::add(const Coef& a, const Coef& b) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      const auto& x = padic(a);
      const auto& y = padic(b);
      if (x.exact() && y.exact()) return PadicNumber{x.value + y.value, kInfinitePrecision};
      return normalize(x.value + y.value, std::min(x.prec, y.prec));
    }
    case BaseKind::FiniteField:
      return gf_->add(ff(a), ff(b));
    case BaseKind::RealModel:
      return real(a) + real(b);
  }
  return {};
}

Coef BaseField::neg(const Coef& a) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      const auto& x = padic(a);
      if (x.exact()) return PadicNumber{-x.value, kInfinitePrecision};
      return normalize(-x.value, x.prec);
    }
    case BaseKind::FiniteField:
      return gf_->neg(ff(a));
    case BaseKind::RealModel:
      return -real(a);
  }
  return {};
}

Coef BaseField::mul(const Coef& a, const Coef& b) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      const auto& x = padic(a);
      const auto& y = padic(b);
      if ((x.exact() && x.value == 0) || (y.exact() && y.value == 0)) return PadicNumber{0, kInfinitePrecision};
      if (x.exact() && y.exact()) return PadicNumber{x.value * y.value, kInfinitePrecision};  // already canonical
      // lower bounds for the true valuations
      std::int64_t vx = x.value != 0 ? arith::padic_valuation(x.value, p_) : x.prec;
      std::int64_t vy = y.value != 0 ? arith::padic_valuation(y.value, p_) : y.prec;
      std::int64_t prec = std::min(sat_add(x.prec, vy), sat_add(y.prec, vx));
      return normalize(x.value * y.value, prec);
    }
    case BaseKind::FiniteField:
      return gf_->mul(ff(a), ff(b));
    case BaseKind::RealModel:
      return real(a) * real(b);
  }
  return {};
}

Coef BaseField::inv(const Coef& a) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      const auto& x = padic(a);
      if (x.value == 0) {
        if (x.exact()) throw DomainError("inverse of zero");
        throw PrecisionError("inverse of O(p^" + std::to_string(x.prec) + ")");
      }
      std::int64_t v = arith::padic_valuation(x.value, p_);
      std::int64_t prec = x.exact() ? kInfinitePrecision : x.prec - 2 * v;
      return normalize(1 / x.value, prec);
    }
    case BaseKind::FiniteField:
      return gf_->inv(ff(a));
    case BaseKind::RealModel:
      return real(a).inverse();
  }
  return {};
}

Coef BaseField::pow(const Coef& a, std::int64_t e) const {
  if (e < 0) return pow(inv(a), -e);
  Coef result = one();
  Coef base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return result;
}

bool BaseField::is_exact_zero(const Coef& a) const {
  switch (kind_) {
    case BaseKind::PadicQ:
      return padic(a).exact() && padic(a).value == 0;
    case BaseKind::FiniteField:
      return ff(a) == 0;
    case BaseKind::RealModel:
      return real(a).is_zero();
  }
  return false;
}

bool BaseField::is_exact(const Coef& a) const { return kind_ != BaseKind::PadicQ || padic(a).exact(); }

bool BaseField::is_zero_at_precision(const Coef& a) const {
  switch (kind_) {
    case BaseKind::PadicQ:
      return padic(a).value == 0;
    case BaseKind::FiniteField:
      return ff(a) == 0;
    case BaseKind::RealModel:
      return real(a).is_zero();
  }
  return false;
}

std::int64_t BaseField::valuation(const Coef& a) const {
  if (kind_ != BaseKind::PadicQ) throw DomainError("base field carries no valuation coordinate");
  const auto& x = padic(a);
  if (x.value == 0) {
    if (x.exact()) throw DomainError("valuation of zero coefficient");
    throw PrecisionError("valuation of O(p^" + std::to_string(x.prec) + ")");
  }
  return arith::padic_valuation(x.value, p_);
}

std::int64_t BaseField::precision(const Coef& a) const { return kind_ == BaseKind::PadicQ ? padic(a).prec : kInfinitePrecision; }

Residue BaseField::angular(const Coef& a) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      mpz_class d = unit_digits(a, 1);
      return static_cast<GaloisField::Elem>(d.get_ui());
    }
    case BaseKind::FiniteField:
      if (ff(a) == 0) throw DomainError("angular component of zero");
      return ff(a);
    case BaseKind::RealModel:
      if (real(a).is_zero()) throw DomainError("angular component of zero");
      return real(a);
  }
  return GaloisField::Elem{0};
}

Coef BaseField::lift(const Residue& r) const {
  switch (kind_) {
    case BaseKind::PadicQ:
      return from_int(std::get<GaloisField::Elem>(r));
    case BaseKind::FiniteField:
      return std::get<GaloisField::Elem>(r);
    case BaseKind::RealModel:
      return std::get<RealNumber>(r);
  }
  return {};
}

mpz_class BaseField::unit_digits(const Coef& a, std::int64_t digits) const {
  std::int64_t v = valuation(a);
  const auto& x = padic(a);
  if (!x.exact() && x.prec - v < digits)
    throw PrecisionError("only " + std::to_string(x.prec - v) + " unit digits known, " + std::to_string(digits) + " needed");
  mpq_class unit = x.value / arith::qpow(mpq_class(p_), v);
  return arith::reduce_unit(unit, p_, digits);
}

Coef BaseField::frobenius_root(const Coef& a) const {
  if (kind_ != BaseKind::FiniteField) throw DomainError("Frobenius root needs a finite base field");
  return gf_->frobenius_root(ff(a));
}

Residue BaseField::residue_zero() const {
  if (kind_ == BaseKind::RealModel) return RealNumber();
  return GaloisField::Elem{0};
}

Residue BaseField::residue_one() const {
  if (kind_ == BaseKind::RealModel) return RealNumber(1);
  return GaloisField::Elem{1};
}

Residue BaseField::residue_mul(const Residue& a, const Residue& b) const {
  if (kind_ == BaseKind::RealModel) return std::get<RealNumber>(a) * std::get<RealNumber>(b);
  return gf_->mul(std::get<GaloisField::Elem>(a), std::get<GaloisField::Elem>(b));
}

bool BaseField::residue_is_zero(const Residue& a) const {
  if (kind_ == BaseKind::RealModel) return std::get<RealNumber>(a).is_zero();
  return std::get<GaloisField::Elem>(a) == 0;
}

Residue BaseField::residue_from_rational(const mpq_class& q) const {
  if (kind_ == BaseKind::RealModel) return RealNumber(q);
  if (kind_ == BaseKind::FiniteField) return std::get<GaloisField::Elem>(from_rational(q));
  mpz_class num = q.get_num() % p_;
  mpz_class den = q.get_den() % p_;
  if (den == 0) throw DomainError("rational has no residue");
  return gf_->div(gf_->from_int(num.get_si()), gf_->from_int(den.get_si()));
}

std::string BaseField::residue_to_string(const Residue& r) const {
  if (kind_ == BaseKind::RealModel) return std::get<RealNumber>(r).to_string();
  return gf_->to_string(std::get<GaloisField::Elem>(r));
}

std::string BaseField::to_string(const Coef& a) const {
  switch (kind_) {
    case BaseKind::PadicQ: {
      const auto& x = padic(a);
      if (x.exact()) return x.value.get_str();
      return "(" + x.value.get_str() + " + O(" + std::to_string(p_) + "^" + std::to_string(x.prec) + "))";
    }
    case BaseKind::FiniteField: {
      std::string s = gf_->to_string(ff(a));
      return s.find(' ') == std::string::npos ? s : "(" + s + ")";
    }
    case BaseKind::RealModel: {
      const auto& x = real(a);
      std::string s = x.to_string();
      return x.is_rational() ? s : "(" + s + ")";
    }
  }
  return "?";
}

}  // namespace valgroth
