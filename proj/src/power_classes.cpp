#include "valgroth/power_classes.hpp"

#include <algorithm>
#include <set>

#include "valgroth/errors.hpp"

namespace valgroth {

using arith::kInfinitePrecision;

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("index does not fit in 64 bits");
  return r;
}

std::uint64_t small_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r = checked_mul(r, base);
  return r;
}

std::int64_t vp(std::uint32_t n, std::uint32_t p) { return p == 0 ? 0 : arith::int_valuation(n, p); }

// Newton iteration for y^n = u modulo p^L starting from y with v(y^n - u) > 2 v_p(n).
mpz_class hensel_lift(const mpz_class& u_mod, std::uint32_t p, std::uint32_t n, mpz_class y, std::int64_t L) {
  const std::int64_t k = vp(n, p);
  const mpz_class mod = arith::ipow(p, L);
  const mpz_class pk = arith::ipow(p, k);
  const mpz_class n_unit = mpz_class(n) / pk;
  for (int iter = 0; iter < 200; ++iter) {
    mpz_class yn;
    mpz_powm_ui(yn.get_mpz_t(), y.get_mpz_t(), n, mod.get_mpz_t());
    mpz_class f = yn - u_mod;
    f %= mod;
    if (f < 0) f += mod;
    if (f == 0) return y;
    mpz_class deriv;
    mpz_powm_ui(deriv.get_mpz_t(), y.get_mpz_t(), n - 1, mod.get_mpz_t());
    deriv = deriv * n_unit % mod;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), deriv.get_mpz_t(), mod.get_mpz_t()) == 0) throw DomainError("Hensel step: derivative not invertible");
    if (f % pk != 0) throw DomainError("Hensel step: start point not close enough to a root");
    mpz_class delta = (f / pk) * inv % mod;
    y = (y - delta) % mod;
    if (y < 0) y += mod;
  }
  throw PrecisionError("Hensel iteration did not converge");
}

// Least start point y (by residue, then by y mod 4 over Q_2, then by value) with y^n = u mod p^K.
std::optional<std::uint64_t> least_residue_root(std::uint64_t u, std::uint32_t p, std::uint32_t n, std::uint64_t modulus) {
  if (p == 2) {
    for (std::uint64_t start : {1ull, 3ull}) {
      if (modulus < 4 && start == 3) break;
      for (std::uint64_t y = start; y < modulus; y += 4)
        if (powmod(y, n, modulus) == u % modulus) return y;
      if (modulus <= 2) break;
    }
    return std::nullopt;
  }
  for (std::uint64_t a = 1; a < p; ++a) {
    if (powmod(a, n, p) != u % p) continue;
    for (std::uint64_t y = a; y < modulus; y += p)
      if (powmod(y, n, modulus) == u % modulus) return y;
  }
  return std::nullopt;
}

std::uint64_t unit_modulus(std::uint32_t p, std::uint32_t n) {
  std::int64_t K = 2 * vp(n, p) + 1;
  mpz_class m = arith::ipow(p, K);
  if (!m.fits_ulong_p() || m > mpz_class(1ul << 40)) throw DomainError("unit class modulus too large");
  return m.get_ui();
}

// Exact rational n-th roots of q (both signs for even n).
std::vector<mpq_class> rational_roots(const mpq_class& q, std::uint32_t n) {
  if (q == 0) return {mpq_class(0)};
  if (q < 0 && n % 2 == 0) return {};
  mpz_class num = abs(q.get_num()), den = q.get_den(), rn, rd;
  if (!arith::exact_root(num, n, rn) || !arith::exact_root(den, n, rd)) return {};
  mpq_class r(rn, rd);
  r.canonicalize();
  if (q < 0) return {-r};
  if (n % 2 == 0) return {r, -r};
  return {r};
}

}  // namespace

// ---------------------------------------------------------------------------
// Base-field predicates and roots

bool base_is_nth_power(const BaseField& base, const Coef& c, std::uint32_t n) {
  if (n < 2) throw DomainError("power class index must be at least 2");
  switch (base.kind()) {
    case BaseKind::PadicQ: {
      const std::uint32_t p = base.residue_characteristic();
      std::int64_t v = base.valuation(c);
      if (v % n != 0) return false;
      std::uint64_t M = unit_modulus(p, n);
      std::int64_t K = 2 * vp(n, p) + 1;
      std::uint64_t u = base.unit_digits(c, K).get_ui();
      if (p != 2) {
        std::uint64_t phi = M / p * (p - 1);
        return powmod(u, phi / std::gcd<std::uint64_t>(n, phi), M) == 1;
      }
      return least_residue_root(u, p, n, M).has_value();
    }
    case BaseKind::FiniteField: {
      if (base.is_exact_zero(c)) return false;
      std::uint64_t q = base.order();
      std::uint64_t g = std::gcd<std::uint64_t>(n, q - 1);
      return base.gf().pow(base.ff(c), static_cast<std::int64_t>((q - 1) / g)) == 1;
    }
    case BaseKind::RealModel: {
      int s = base.real(c).sign();
      if (s == 0) return false;
      return n % 2 == 1 || s > 0;
    }
  }
  return false;
}

Coef base_nth_root(const BaseField& base, const Coef& c, std::uint32_t n) {
  if (!base_is_nth_power(base, c, n)) throw DomainError("coefficient " + base.to_string(c) + " is not an n-th power");
  switch (base.kind()) {
    case BaseKind::PadicQ: {
      const std::uint32_t p = base.residue_characteristic();
      const std::int64_t k = vp(n, p);
      const std::int64_t K = 2 * k + 1;
      const std::int64_t v = base.valuation(c);
      const auto& x = base.padic(c);
      const mpq_class scale = arith::qpow(mpq_class(p), v / static_cast<std::int64_t>(n));
      std::uint64_t M = unit_modulus(p, n);
      std::uint64_t u0 = base.unit_digits(c, K).get_ui();
      std::uint64_t y0 = *least_residue_root(u0, p, n, M);

      mpq_class unit = x.value / arith::qpow(mpq_class(p), v);
      if (x.exact()) {
        for (const mpq_class& r : rational_roots(unit, n)) {
          mpz_class digits = arith::reduce_unit(r, p, k + 1);
          if (digits == mpz_class(y0) % arith::ipow(p, k + 1)) return PadicNumber{r * scale, kInfinitePrecision};
        }
      }
      std::int64_t L = base.padic_precision() + 2 * k + 1;
      if (!x.exact()) L = std::min(L, x.prec - v);
      if (L < K) throw PrecisionError("too few digits to extract an n-th root");
      mpz_class u_mod = arith::reduce_unit(unit, p, L);
      mpz_class y = hensel_lift(u_mod, p, n, mpz_class(y0), L);
      return base.approx(mpq_class(y) * scale, v / static_cast<std::int64_t>(n) + L - k);
    }
    case BaseKind::FiniteField: {
      const auto& F = base.gf();
      for (GaloisField::Elem a = 1; a < F.order(); ++a)
        if (F.pow(a, n) == base.ff(c)) return a;
      throw DomainError("no root found in the finite field");
    }
    case BaseKind::RealModel: {
      const RealNumber& r = base.real(c);
      if (!r.is_rational()) {
        throw RepresentationError("root of irrational coefficient " + r.to_string() + " is outside the real model");
      }
      mpq_class q = r.rational_value();
      auto roots = rational_roots(q, n);
      if (!roots.empty()) return RealNumber(*std::max_element(roots.begin(), roots.end()));
      if (n == 2) return r.sqrt();
      if (n % 2 == 0) {
        auto half = rational_roots(q, n / 2);
        for (const auto& h : half)
          if (h > 0) return RealNumber(h).sqrt();
      }
      throw RepresentationError("the " + std::to_string(n) + "-th root of " + q.get_str() + " is not representable");
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Element-level predicates

LeadingForm leading_form(const Element& x) {
  const Field& K = x.field();
  (void)x.valuation();  // rejects zero-at-precision leading terms
  if (x.is_zero()) throw DomainError("zero has no leading term");
  LeadingForm lf;
  const Node* cur = &x.node();
  for (std::size_t level = K.depth(); level > 0; --level) {
    lf.exponents.push_back(cur->terms.front().first);
    cur = &cur->terms.front().second;
  }
  lf.coef = cur->coef;
  Element lead = K.term(lf.exponents, lf.coef);
  lf.unit = x * lead.inverse();
  return lf;
}

namespace {

bool all_exponents_divisible(const Node& a, std::size_t d, std::int64_t p) {
  if (d == 0) return true;
  for (const auto& [e, v] : a.terms)
    if (e % p != 0 || !all_exponents_divisible(v, d - 1, p)) return false;
  return true;
}

Node truncate_outer(Node a, std::int64_t limit) {
  while (!a.terms.empty() && a.terms.back().first >= limit) a.terms.pop_back();
  a.bound = a.bound ? std::min(*a.bound, limit) : limit;
  return a;
}

Node strip_bounds(const Node& a, std::size_t d) {
  if (d == 0) return a;
  Node r;
  for (const auto& [e, v] : a.terms) r.terms.emplace_back(e, strip_bounds(v, d - 1));
  return r;
}

Node outer_constant(Node inner) {
  Node c;
  c.terms.emplace_back(0, std::move(inner));
  return c;
}

// n-th root of a unit whose leading term is exactly 1 (depth-d node).
Node unit_root(const Field& K, const Node& a, std::size_t d, std::uint32_t n) {
  if (d == 0) {
    Node r;
    r.coef = base_nth_root(K.base(), a.coef, n);
    return r;
  }
  if (a.terms.empty() || a.terms.front().first != 0) throw DomainError("unit root: leading exponent must be 0");
  const Node& a0 = a.terms.front().second;
  Node r0 = unit_root(K, a0, d - 1, n);
  if (a.terms.size() == 1 && !a.bound) return outer_constant(std::move(r0));

  const std::int64_t D = K.descriptor().cutoff;
  Node normalized = K.node_mul(a, outer_constant(K.node_inverse(a0, d - 1)), d);
  // the outer constant term of `normalized` is exactly 1; drop it rather than subtract
  Node w = normalized;
  if (!w.terms.empty() && w.terms.front().first == 0) w.terms.erase(w.terms.begin());
  std::int64_t s0 = w.terms.empty() ? (w.bound ? *w.bound : D) : w.terms.front().first;
  if (s0 <= 0) throw DomainError("unit root: correction term has non-positive order");

  Node series = K.node_constant(K.base().one(), d);
  Node power = K.node_constant(K.base().one(), d);
  for (std::uint32_t j = 1; static_cast<std::int64_t>(j) * s0 < D; ++j) {
    power = truncate_outer(K.node_mul(power, w, d), D);
    Coef b = K.base().from_rational(arith::binomial_root_coefficient(n, j));
    series = K.node_add(series, K.node_scale(power, b, d), d);
  }
  series = truncate_outer(std::move(series), D);
  return K.node_mul(outer_constant(std::move(r0)), series, d);
}

}  // namespace

bool is_nth_power(const Element& x, std::uint32_t n) {
  if (n < 2) throw DomainError("power class index must be at least 2");
  if (x.is_zero()) return false;
  const Field& K = x.field();
  const std::uint32_t p = K.characteristic();
  if (p != 0 && n % p == 0) {
    if (!all_exponents_divisible(x.node(), K.depth(), p)) return false;
    Element y = K.wrap(K.node_frobenius_root(x.node(), K.depth()));
    return n == p ? true : is_nth_power(y, n / p);
  }
  LeadingForm lf = leading_form(x);
  for (auto e : lf.exponents)
    if (e % static_cast<std::int64_t>(n) != 0) return false;
  return base_is_nth_power(K.base(), lf.coef, n);
}

Element nth_root(const Element& x, std::uint32_t n) {
  if (n < 2) throw DomainError("root index must be at least 2");
  const Field& K = x.field();
  if (x.is_zero()) return K.zero();
  const std::uint32_t p = K.characteristic();
  if (p != 0 && n % p == 0) {
    if (!all_exponents_divisible(x.node(), K.depth(), p)) throw DomainError("not a p-th power: " + x.to_string());
    Element y = K.wrap(K.node_frobenius_root(x.node(), K.depth()));
    return n == p ? y : nth_root(y, n / p);
  }
  if (!is_nth_power(x, n)) throw DomainError(x.to_string() + " is not a " + std::to_string(n) + "-th power");
  LeadingForm lf = leading_form(x);
  std::vector<std::int64_t> e;
  for (auto v : lf.exponents) e.push_back(v / static_cast<std::int64_t>(n));
  Element lead = K.term(e, base_nth_root(K.base(), lf.coef, n));
  Element root = lead * K.wrap(unit_root(K, lf.unit.node(), K.depth(), n));
  if (x.is_exact() && !root.is_exact()) {
    Element candidate = K.wrap(strip_bounds(root.node(), K.depth()));
    if (candidate.is_exact() && candidate.pow(n).identical(x)) return candidate;
  }
  return root;
}

std::vector<std::uint64_t> root_key(const BaseField& B, const Coef& c, std::uint32_t n) {
  switch (B.kind()) {
    case BaseKind::PadicQ: {
      std::uint32_t p = B.residue_characteristic();
      if (p == 2 && n % 2 == 0) return {1, B.unit_digits(c, 2).get_ui()};
      return {B.unit_digits(c, 1).get_ui()};
    }
    case BaseKind::FiniteField:
      return {B.ff(c)};
    case BaseKind::RealModel:
      return {B.real(c).sign() > 0 ? 0u : 1u};
  }
  return {};
}

std::vector<std::uint64_t> root_key(const Element& x, std::uint32_t n) {
  return root_key(x.field().base(), leading_form(x).coef, n);
}

// ---------------------------------------------------------------------------
// Invariants

std::uint64_t roots_of_unity_count(const FieldDescriptor& d, std::uint32_t n) {
  if (n == 0) throw DomainError("n must be positive");
  if (n == 1) return 1;
  switch (d.base) {
    case BaseKind::PadicQ:
      return d.p == 2 ? std::gcd<std::uint64_t>(n, 2) : std::gcd<std::uint64_t>(n, d.p - 1);
    case BaseKind::FiniteField:
      return std::gcd<std::uint64_t>(n, d.q - 1);
    case BaseKind::RealModel:
      return n % 2 == 0 ? 2 : 1;
  }
  return 1;
}

Index power_index(const FieldDescriptor& d, std::uint32_t n) {
  if (n == 0) throw DomainError("n must be positive");
  if (n == 1) return {1};
  const std::uint64_t layers = d.depth();
  switch (d.base) {
    case BaseKind::PadicQ: {
      std::uint64_t base = checked_mul(checked_mul(n, roots_of_unity_count(d, n)), small_pow(d.p, vp(n, d.p)));
      return {checked_mul(base, small_pow(n, layers))};
    }
    case BaseKind::FiniteField: {
      std::uint32_t p = 0, l = 0;
      arith::prime_power(d.q, p, l);
      if (layers > 0 && n % p == 0) return {std::nullopt};
      return {checked_mul(std::gcd<std::uint64_t>(n, d.q - 1), small_pow(n, layers))};
    }
    case BaseKind::RealModel:
      return {checked_mul(n % 2 == 0 ? 2 : 1, small_pow(n, layers))};
  }
  return {};
}

PowerClassReport lambda_report(const FieldDescriptor& d, std::uint32_t n) {
  PowerClassReport r;
  r.n = n;
  r.r_n = roots_of_unity_count(d, n);
  r.s_n = power_index(d, n);
  r.capability = d.root_capability_for(n);
  if (r.s_n.infinite()) {
    r.fallback = true;
    r.fallback_reason = "index of n-th powers is infinite";
  } else if (*r.s_n.value % r.r_n != 0) {
    r.fallback = true;
    r.fallback_reason = "s_n / r_n is not an integer";
  } else if (!r.capability) {
    r.fallback = true;
    r.fallback_reason = "no definable n-th root function recorded for this tower";
  }
  r.lambda = r.fallback ? 1 : *r.s_n.value / r.r_n;
  return r;
}

SubgroupH subgroup_H(const FieldDescriptor& d, std::uint32_t prime_bound) {
  if (prime_bound < 2) throw DomainError("prime bound must be at least 2");
  SubgroupH h;
  h.prime_bound = prime_bound;
  for (std::uint32_t ell : arith::primes_up_to(prime_bound)) {
    PowerClassReport r = lambda_report(d, ell);
    std::uint64_t w = r.lambda - 1;
    h.witnesses.emplace_back(ell, w);
    h.generator = std::gcd(h.generator, w);
    if (h.generator == 1) break;
  }
  if (d.base == BaseKind::RealModel && d.depth() == 0)
    h.note =
        "bare real field: s_n = r_n for every n, so every lambda_n is 1 and H = {0}; "
        "this disagrees with the claim H(R, L_ring) = Z, which would force K_0 to vanish";
  return h;
}

nlohmann::json to_json(const PowerClassReport& r) {
  nlohmann::json j = {{"n", r.n}, {"r_n", r.r_n}, {"lambda", r.lambda}, {"fallback", r.fallback}};
  if (r.s_n.infinite())
    j["s_n"] = "inf";
  else
    j["s_n"] = *r.s_n.value;
  j["capability"] = r.capability ? nlohmann::json(*r.capability) : nlohmann::json(nullptr);
  if (r.fallback) j["fallback_reason"] = r.fallback_reason;
  return j;
}

nlohmann::json to_json(const SubgroupH& h) {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& [n, v] : h.witnesses) w.push_back({{"n", n}, {"lambda_minus_1", v}});
  nlohmann::json j = {{"generator", h.generator}, {"prime_bound", h.prime_bound}, {"witnesses", w}};
  if (h.note) j["note"] = *h.note;
  return j;
}

// ---------------------------------------------------------------------------
// PowerClasses

PowerClasses::PowerClasses(std::shared_ptr<const Field> field, std::uint32_t n) : field_(std::move(field)), n_(n) {
  if (n < 2) throw DomainError("n must be at least 2");
  const BaseField& B = field_->base();
  const FieldDescriptor& d = field_->descriptor();
  if (power_index(d, n).infinite()) throw DomainError("index of " + std::to_string(n) + "-th powers is infinite");

  switch (B.kind()) {
    case BaseKind::PadicQ: {
      const std::uint32_t p = B.residue_characteristic();
      modulus_ = unit_modulus(p, n);
      std::set<std::uint64_t> pw;
      for (std::uint64_t y = 1; y < modulus_; ++y)
        if (y % p != 0) pw.insert(powmod(y, n, modulus_));
      power_set_.assign(pw.begin(), pw.end());
      std::uint64_t units = modulus_ / p * (p - 1);
      std::size_t classes = units / power_set_.size();
      for (std::uint64_t u = 1; unit_reps_.size() < classes; ++u) {
        if (u % p == 0) continue;
        std::uint64_t key = class_key(u);
        if (key_to_class_.emplace(key, unit_reps_.size()).second) unit_reps_.push_back(B.from_int(static_cast<std::int64_t>(u)));
      }
      // roots of unity: residues of order dividing n, lifted (p odd); +-1 (p = 2)
      std::vector<std::uint64_t> residues;
      if (p == 2) {
        residues = n % 2 == 0 ? std::vector<std::uint64_t>{1, 3} : std::vector<std::uint64_t>{1};
        for (auto a : residues) roots_.push_back(field_->from_int(a == 1 ? 1 : -1));
      } else {
        auto np = static_cast<std::uint32_t>(std::gcd<std::uint64_t>(n, p - 1));
        for (std::uint64_t a = 1; a < p; ++a) {
          if (powmod(a, np, p) != 1) continue;
          if (a == 1) {
            roots_.push_back(field_->one());
          } else if (a == p - 1) {
            roots_.push_back(field_->from_int(-1));
          } else {
            std::int64_t L = B.padic_precision() + 1;
            mpz_class y = hensel_lift(mpz_class(1), p, np, mpz_class(static_cast<unsigned long>(a)), L);
            roots_.push_back(field_->from_coef(B.approx(mpq_class(y), L)));
          }
        }
      }
      break;
    }
    case BaseKind::FiniteField: {
      const auto& F = B.gf();
      modulus_ = F.order();
      std::set<std::uint64_t> pw;
      for (GaloisField::Elem a = 1; a < F.order(); ++a) pw.insert(F.pow(a, n));
      power_set_.assign(pw.begin(), pw.end());
      std::size_t classes = (F.order() - 1) / power_set_.size();
      for (GaloisField::Elem u = 1; unit_reps_.size() < classes; ++u) {
        if (key_to_class_.emplace(class_key(u), unit_reps_.size()).second) unit_reps_.push_back(u);
      }
      for (GaloisField::Elem a = 1; a < F.order(); ++a)
        if (F.pow(a, n) == 1) roots_.push_back(field_->from_coef(a));
      break;
    }
    case BaseKind::RealModel:
      unit_reps_.push_back(B.one());
      roots_.push_back(field_->one());
      if (n % 2 == 0) {
        unit_reps_.push_back(B.from_int(-1));
        roots_.push_back(field_->from_int(-1));
      }
      break;
  }
  for (const auto& z : roots_) root_keys_.push_back(root_key(z, n_));
}

std::uint64_t PowerClasses::class_key(std::uint64_t code) const {
  const BaseField& B = field_->base();
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t s : power_set_) {
    std::uint64_t v = B.kind() == BaseKind::FiniteField ? B.gf().mul(static_cast<GaloisField::Elem>(code), static_cast<GaloisField::Elem>(s))
                                                        : mulmod(code, s, modulus_);
    best = std::min(best, v);
  }
  return best;
}

std::uint64_t PowerClasses::code_of(const Coef& c) const {
  const BaseField& B = field_->base();
  switch (B.kind()) {
    case BaseKind::PadicQ: {
      std::int64_t K = 2 * vp(n_, B.residue_characteristic()) + 1;
      return B.unit_digits(c, K).get_ui();
    }
    case BaseKind::FiniteField:
      return B.ff(c);
    case BaseKind::RealModel:
      return B.real(c).sign() > 0 ? 0 : 1;
  }
  return 0;
}

std::size_t PowerClasses::unit_class_of(const Coef& c) const {
  if (field_->base().kind() == BaseKind::RealModel) {
    std::uint64_t code = code_of(c);
    return n_ % 2 == 0 ? code : 0;
  }
  return key_to_class_.at(class_key(code_of(c)));
}

Coef PowerClasses::unit_of(const Coef& c) const {
  const BaseField& B = field_->base();
  if (B.kind() != BaseKind::PadicQ) return c;
  std::int64_t v = B.valuation(c);
  return B.mul(c, PadicNumber{arith::qpow(mpq_class(B.residue_characteristic()), -v), kInfinitePrecision});
}

std::size_t PowerClasses::index_count() const {
  return unit_reps_.size() * small_pow(n_, field_->value_arity());
}

std::vector<Element> PowerClasses::coset_representatives() const {
  const std::size_t d = field_->value_arity();
  const std::uint64_t digits = small_pow(n_, d);
  std::vector<Element> out;
  for (std::uint64_t b = 0; b < digits; ++b) {
    std::vector<std::int64_t> beta(d);
    std::uint64_t rest = b;
    for (std::size_t i = d; i > 0; --i) {
      beta[i - 1] = static_cast<std::int64_t>(rest % n_);
      rest /= n_;
    }
    Element m = field_->monomial(ValTuple(beta));
    for (const auto& u : unit_reps_) out.push_back(m * field_->from_coef(u));
  }
  return out;
}

std::size_t PowerClasses::class_of(const Element& x) const {
  if (x.is_zero()) throw DomainError("zero lies in no coset of P_n");
  ValTuple g = x.valuation();
  std::uint64_t b = 0;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    std::int64_t r = ((g[i] % static_cast<std::int64_t>(n_)) + n_) % n_;
    b = b * n_ + static_cast<std::uint64_t>(r);
  }
  LeadingForm lf = leading_form(x);
  return b * unit_reps_.size() + unit_class_of(lf.coef);
}

std::size_t PowerClasses::root_index_of(const Element& z) const {
  const BaseField& B = field_->base();
  const Coef& c = field_->node_leading_coef(z.node(), field_->depth());
  Coef y = base_nth_root(B, B.pow(c, n_), n_);
  auto key = root_key(B, B.mul(c, B.inv(y)), n_);
  for (std::size_t j = 0; j < root_keys_.size(); ++j)
    if (root_keys_[j] == key) return j;
  throw DomainError("leading coefficient is not a root of unity times a canonical root");
}

std::size_t PowerClasses::root_of_unity_index(const Element& x) const {
  auto key = root_key(x, n_);
  for (std::size_t j = 0; j < root_keys_.size(); ++j)
    if (root_keys_[j] == key) return j;
  throw DomainError("element is not a root of unity times a canonical root");
}

// ---------------------------------------------------------------------------
// Exhaustive oracles

std::uint64_t brute_roots_of_unity(const FieldDescriptor& d, std::uint32_t n) {
  switch (d.base) {
    case BaseKind::PadicQ: {
      const std::uint32_t p = d.p;
      const std::uint64_t M7 = small_pow(p, 7);
      const std::int64_t k = vp(n, p);
      const std::uint64_t Mproj = small_pow(p, static_cast<std::uint64_t>(7 - k - 1));
      std::set<std::uint64_t> seen;
      for (std::uint64_t x = 1; x < M7; ++x)
        if (x % p != 0 && powmod(x, n, M7) == 1) seen.insert(x % Mproj);
      return seen.size();
    }
    case BaseKind::FiniteField: {
      std::uint32_t p = 0, l = 0;
      arith::prime_power(d.q, p, l);
      GaloisField F(p, l);
      std::uint64_t count = 0;
      for (GaloisField::Elem a = 1; a < F.order(); ++a) count += F.pow(a, n) == 1;
      return count;
    }
    case BaseKind::RealModel:
      break;
  }
  throw DomainError("no exhaustive oracle for the real model");
}

std::uint64_t brute_power_index(const FieldDescriptor& d, std::uint32_t n) {
  switch (d.base) {
    case BaseKind::PadicQ: {
      const std::uint32_t p = d.p;
      const std::uint64_t M7 = small_pow(p, 7);
      std::vector<bool> hit(M7, false);
      std::uint64_t units = 0, powers = 0;
      for (std::uint64_t x = 1; x < M7; ++x) {
        if (x % p == 0) continue;
        ++units;
        std::uint64_t y = powmod(x, n, M7);
        if (!hit[y]) {
          hit[y] = true;
          ++powers;
        }
      }
      return n * (units / powers);
    }
    case BaseKind::FiniteField: {
      std::uint32_t p = 0, l = 0;
      arith::prime_power(d.q, p, l);
      GaloisField F(p, l);
      std::set<GaloisField::Elem> powers;
      for (GaloisField::Elem a = 1; a < F.order(); ++a) powers.insert(F.pow(a, n));
      return (F.order() - 1) / powers.size();
    }
    case BaseKind::RealModel:
      break;
  }
  throw DomainError("no exhaustive oracle for the real model");
}

}  // namespace valgroth
