#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "valgroth/field.hpp"

namespace valgroth {

enum class SampleStrategy {
  Random,    // any element, valuations anywhere in the window
  Boundary,  // special values first (0, 1, pi, 1/pi, ...), then random
  Ring,      // v(x) >= 0
  Unit,      // v(x) = 0
  RingAc1,   // v(x) >= 0 and ac(x) = 1
  RingNonzero,
};

SampleStrategy parse_strategy(const std::string& name);
std::string strategy_name(SampleStrategy s);

struct SamplerSpec {
  SampleStrategy strategy = SampleStrategy::Random;
  std::int64_t exponent_low = -3;   // per-coordinate valuation window
  std::int64_t exponent_high = 3;
  std::size_t max_extra_terms = 3;  // terms beyond the leading one
  std::int64_t coefficient_range = 9;
  double zero_rate = 0.02;
};

/// Deterministic integer draws; std distributions are not portable across libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  bool chance(double probability);
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Deterministic element stream.  Every strategy starts with a fixed prefix of
/// edge cases compatible with it (0 and 1 where allowed, the uniformizer, its
/// inverse, ...), followed by random elements.
class Sampler {
 public:
  Sampler(std::shared_ptr<const Field> field, SamplerSpec spec, std::uint64_t seed);

  Element next();
  std::vector<Element> take(std::size_t count);
  /// The edge-case prefix for this strategy.
  std::vector<Element> boundary_cases() const;

  Element random_element();
  Element random_with_valuation(const ValTuple& gamma, bool ac_one = false);
  ValTuple random_valuation(bool nonnegative);
  Coef random_base_unit();

 private:
  std::shared_ptr<const Field> field_;
  SamplerSpec spec_;
  Rng rng_;
  std::vector<Element> prefix_;
  std::size_t emitted_ = 0;

  Coef random_base_coefficient();
  Element draw();
};

}  // namespace valgroth
