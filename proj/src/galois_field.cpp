#include "valgroth/galois_field.hpp"

#include "valgroth/arith.hpp"
#include "valgroth/errors.hpp"

namespace valgroth {

namespace {

std::vector<std::uint32_t> digits(std::uint32_t code, std::uint32_t p, std::uint32_t n) {
  std::vector<std::uint32_t> d(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = d.size(); i-- > 0;) code = code * p + d[i];
  return code;
}

}  // namespace

GaloisField::GaloisField(std::uint32_t p, std::uint32_t degree) : p_(p), degree_(degree) {
  if (!arith::is_prime(p)) throw ConfigError("GF characteristic must be prime: " + std::to_string(p));
  if (degree == 0) throw ConfigError("GF degree must be positive");
  q_ = static_cast<std::uint32_t>(arith::ipow(p, degree).get_ui());
  if (q_ > (1u << 16)) throw ConfigError("GF order too large for table arithmetic");

  // Search monic polynomials of the given degree for one whose root X has
  // multiplicative order q-1.  The tail coefficients range over all codes.
  for (std::uint32_t tail = 1; tail < q_; ++tail) {
    modulus_ = digits(tail, p_, degree_);
    modulus_.push_back(1);
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    Elem x = 1;
    bool primitive = true;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
      if (i > 0 && x == 1) {
        primitive = false;
        break;
      }
      exp_[i] = x;
      log_[x] = i;
      x = mul_by_x(x);
    }
    if (primitive && x == 1) return;
  }
  throw ConfigError("no primitive polynomial found");
}

GaloisField::Elem GaloisField::mul_by_x(Elem a) const {
  if (degree_ == 1) {
    // X is the root of X + c, i.e. X = -c.
    std::uint32_t root = (p_ - modulus_[0]) % p_;
    return static_cast<Elem>((static_cast<std::uint64_t>(a) * root) % p_);
  }
  auto d = digits(a, p_, degree_);
  std::uint32_t top = d.back();
  for (std::uint32_t i = degree_ - 1; i > 0; --i) d[i] = d[i - 1];
  d[0] = 0;
  for (std::uint32_t i = 0; i < degree_; ++i) d[i] = (d[i] + (p_ - (top * modulus_[i]) % p_)) % p_;
  return undigits(d, p_);
}

GaloisField::Elem GaloisField::add(Elem a, Elem b) const {
  if (degree_ == 1) return (a + b) % p_;
  auto da = digits(a, p_, degree_);
  auto db = digits(b, p_, degree_);
  for (std::uint32_t i = 0; i < degree_; ++i) da[i] = (da[i] + db[i]) % p_;
  return undigits(da, p_);
}

GaloisField::Elem GaloisField::neg(Elem a) const {
  if (degree_ == 1) return (p_ - a) % p_;
  auto d = digits(a, p_, degree_);
  for (auto& c : d) c = (p_ - c) % p_;
  return undigits(d, p_);
}

GaloisField::Elem GaloisField::sub(Elem a, Elem b) const { return add(a, neg(b)); }

GaloisField::Elem GaloisField::mul(Elem a, Elem b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

GaloisField::Elem GaloisField::inv(Elem a) const {
  if (a == 0) throw DomainError("inverse of zero in GF(" + std::to_string(q_) + ")");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

GaloisField::Elem GaloisField::pow(Elem a, std::int64_t e) const {
  if (a == 0) {
    if (e < 0) throw DomainError("zero to a negative power");
    return e == 0 ? 1 : 0;
  }
  std::int64_t m = static_cast<std::int64_t>(q_) - 1;
  std::int64_t k = ((static_cast<std::int64_t>(log_[a]) * (e % m)) % m + m) % m;
  return exp_[static_cast<std::size_t>(k)];
}

GaloisField::Elem GaloisField::from_int(std::int64_t n) const {
  std::int64_t r = n % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Elem>(r);
}

GaloisField::Elem GaloisField::frobenius_root(Elem x) const { return pow(x, q_ / p_); }

std::string GaloisField::to_string(Elem a) const {
  // polynomial in the generator g, lowest degree first
  if (degree_ == 1 || a < p_) return std::to_string(a);
  auto d = digits(a, p_, degree_);
  std::string out;
  for (std::uint32_t i = 0; i < degree_; ++i) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += " + ";
    std::string mono = i == 0 ? "" : (i == 1 ? "g" : "g^" + std::to_string(i));
    if (i == 0)
      out += std::to_string(d[i]);
    else if (d[i] == 1)
      out += mono;
    else
      out += std::to_string(d[i]) + "*" + mono;
  }
  return out;
}

}  // namespace valgroth
