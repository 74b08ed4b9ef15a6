#include "valgroth/sampler.hpp"

#include "valgroth/errors.hpp"

namespace valgroth {

SampleStrategy parse_strategy(const std::string& name) {
  if (name == "random") return SampleStrategy::Random;
  if (name == "boundary") return SampleStrategy::Boundary;
  if (name == "ring") return SampleStrategy::Ring;
  if (name == "unit") return SampleStrategy::Unit;
  if (name == "r1") return SampleStrategy::RingAc1;
  if (name == "ring_nonzero") return SampleStrategy::RingNonzero;
  throw ConfigError("unknown sampling strategy '" + name + "'");
}

std::string strategy_name(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::Random:
      return "random";
    case SampleStrategy::Boundary:
      return "boundary";
    case SampleStrategy::Ring:
      return "ring";
    case SampleStrategy::Unit:
      return "unit";
    case SampleStrategy::RingAc1:
      return "r1";
    case SampleStrategy::RingNonzero:
      return "ring_nonzero";
  }
  return "?";
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw DomainError("empty sampling range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // rejection sampling to avoid modulo bias
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t r;
  do r = engine_();
  while (r >= limit);
  return lo + static_cast<std::int64_t>(r % span);
}

bool Rng::chance(double probability) {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < probability;
}

Sampler::Sampler(std::shared_ptr<const Field> field, SamplerSpec spec, std::uint64_t seed)
    : field_(std::move(field)), spec_(spec), rng_(seed) {
  prefix_ = boundary_cases();
}

std::vector<Element> Sampler::boundary_cases() const {
  const Field& K = *field_;
  std::vector<Element> out;
  const bool ring = spec_.strategy == SampleStrategy::Ring || spec_.strategy == SampleStrategy::RingAc1 ||
                    spec_.strategy == SampleStrategy::RingNonzero;
  const bool allow_zero = spec_.strategy == SampleStrategy::Random || spec_.strategy == SampleStrategy::Boundary ||
                          spec_.strategy == SampleStrategy::Ring;
  const bool units_only = spec_.strategy == SampleStrategy::Unit;
  const bool ac_one = spec_.strategy == SampleStrategy::RingAc1;

  if (allow_zero) out.push_back(K.zero());
  out.push_back(K.one());
  if (!ac_one) out.push_back(-K.one());
  if (K.has_nontrivial_valuation()) {
    Element pi = K.uniformizer();
    if (!units_only) {
      out.push_back(pi);
      out.push_back(pi * pi);
      if (!ac_one) out.push_back(K.from_int(2) * pi);
      for (std::size_t i = 0; i < K.value_arity(); ++i) {
        std::vector<std::int64_t> e(K.value_arity(), 0);
        e[i] = 1;
        out.push_back(K.monomial(ValTuple(e)));
        if (!ring) out.push_back(K.monomial(ValTuple(e)).inverse());
      }
      if (!ring) out.push_back(pi.inverse());
    }
    out.push_back(K.one() + pi);
    if (!ac_one) out.push_back(K.one() - pi);
    if (!units_only) out.push_back(pi + pi * pi);
  }
  if (!ac_one) out.push_back(K.from_int(2));
  // drop values that vanish in small characteristic (2 = 0 in F_2)
  std::vector<Element> kept;
  for (auto& e : out) {
    if (e.is_zero() && !allow_zero) continue;
    if (ac_one && !e.is_zero() && !K.residue_equal(e.angular_component(), K.base().residue_one())) continue;
    if (units_only && !e.valuation().is_zero()) continue;
    bool dup = false;
    for (const auto& k : kept) dup = dup || k.identical(e);
    if (!dup) kept.push_back(std::move(e));
  }
  return kept;
}

Element Sampler::next() {
  if (emitted_ < prefix_.size()) return prefix_[emitted_++];
  ++emitted_;
  return draw();
}

std::vector<Element> Sampler::take(std::size_t count) {
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

Coef Sampler::random_base_coefficient() {
  const BaseField& B = field_->base();
  switch (B.kind()) {
    case BaseKind::PadicQ:
      return B.from_int(rng_.uniform(-spec_.coefficient_range, spec_.coefficient_range));
    case BaseKind::FiniteField:
      return static_cast<GaloisField::Elem>(rng_.uniform(0, B.order() - 1));
    case BaseKind::RealModel: {
      auto num = rng_.uniform(-spec_.coefficient_range, spec_.coefficient_range);
      auto den = rng_.uniform(1, 4);
      return B.from_rational(mpq_class(num, den));
    }
  }
  return {};
}

Coef Sampler::random_base_unit() {
  const BaseField& B = field_->base();
  switch (B.kind()) {
    case BaseKind::PadicQ: {
      auto p = static_cast<std::int64_t>(B.residue_characteristic());
      for (;;) {
        auto num = rng_.uniform(-spec_.coefficient_range * p, spec_.coefficient_range * p);
        auto den = rng_.chance(0.2) ? rng_.uniform(1, 4 * p) : 1;
        if (num % p == 0 || den % p == 0) continue;
        return B.from_rational(mpq_class(num, den));
      }
    }
    case BaseKind::FiniteField:
      return static_cast<GaloisField::Elem>(rng_.uniform(1, B.order() - 1));
    case BaseKind::RealModel:
      for (;;) {
        auto num = rng_.uniform(-spec_.coefficient_range, spec_.coefficient_range);
        if (num != 0) return B.from_rational(mpq_class(num, rng_.uniform(1, 4)));
      }
  }
  return {};
}

ValTuple Sampler::random_valuation(bool nonnegative) {
  const std::size_t d = field_->value_arity();
  for (;;) {
    std::vector<std::int64_t> c(d);
    for (auto& x : c) x = rng_.uniform(spec_.exponent_low, spec_.exponent_high);
    ValTuple v(c);
    if (!nonnegative || v >= ValTuple::zero(d)) return v;
  }
}

Element Sampler::random_with_valuation(const ValTuple& gamma, bool ac_one) {
  const Field& K = *field_;
  const BaseField& B = K.base();
  Element lead = K.monomial(gamma);
  Coef c = ac_one ? B.one() : random_base_unit();
  if (ac_one && B.kind() == BaseKind::PadicQ) {
    // unit congruent to 1 mod p
    auto p = static_cast<std::int64_t>(B.residue_characteristic());
    c = B.from_int(1 + p * rng_.uniform(-spec_.coefficient_range, spec_.coefficient_range));
  }
  Element unit = K.from_coef(c);
  if (K.has_nontrivial_valuation()) {
    auto extra = rng_.uniform(0, static_cast<std::int64_t>(spec_.max_extra_terms));
    for (std::int64_t i = 0; i < extra; ++i) {
      ValTuple delta = random_valuation(true);
      if (delta.is_zero()) delta = ValTuple::min_positive(K.value_arity());
      unit = unit + K.monomial(delta) * K.from_coef(random_base_coefficient());
    }
  }
  return lead * unit;
}

Element Sampler::random_element() { return random_with_valuation(random_valuation(false)); }

Element Sampler::draw() {
  const std::size_t d = field_->value_arity();
  switch (spec_.strategy) {
    case SampleStrategy::Random:
    case SampleStrategy::Boundary:
      if (rng_.chance(spec_.zero_rate)) return field_->zero();
      return random_with_valuation(random_valuation(false));
    case SampleStrategy::Ring:
      if (rng_.chance(spec_.zero_rate)) return field_->zero();
      return random_with_valuation(random_valuation(true));
    case SampleStrategy::RingNonzero:
      return random_with_valuation(random_valuation(true));
    case SampleStrategy::Unit:
      return random_with_valuation(ValTuple::zero(d));
    case SampleStrategy::RingAc1:
      return random_with_valuation(random_valuation(true), true);
  }
  return field_->zero();
}

}  // namespace valgroth
