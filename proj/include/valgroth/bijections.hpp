#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valgroth/field.hpp"
#include "valgroth/ledger.hpp"
#include "valgroth/power_classes.hpp"
#include "valgroth/sampler.hpp"

namespace valgroth {

/// A point of a disjoint union: the component tag plus its coordinates.
struct TaggedPoint {
  std::string tag;
  std::vector<Element> coords;

  std::string to_string() const;
  bool is_exact() const;
};

bool identical(const TaggedPoint& a, const TaggedPoint& b);
bool equal_at_precision(const TaggedPoint& a, const TaggedPoint& b);

// Membership in the basic carriers.
bool in_ring(const Element& x);             // v(x) >= 0 (zero included)
bool in_ring_nonzero(const Element& x);     // R \ {0}
bool in_ring_ac1(const Element& x);         // R1 = {x in R : ac(x) = 1}
bool valuation_at_least(const Element& x, const ValTuple& bound);

/// Draws tagged points; shared by every map's domain and codomain samplers.
class PointSampler {
 public:
  PointSampler(std::shared_ptr<const Field> field, std::uint64_t seed);
  const Field& field() const { return *field_; }
  Element any();      // K
  Element nonzero();  // K^x
  Element ring();     // R
  Element ring_nonzero();
  Element ring_ac1();
  Element unit();
  std::int64_t pick(std::int64_t lo, std::int64_t hi) { return rng_.uniform(lo, hi); }

 private:
  std::shared_ptr<const Field> field_;
  Rng rng_;
  Sampler any_, ring_, ring_nonzero_, ring_ac1_, unit_;
};

using Predicate = std::function<bool(const TaggedPoint&)>;
using PointMap = std::function<TaggedPoint(const TaggedPoint&)>;
using PointDraw = std::function<TaggedPoint(PointSampler&)>;

struct Branch {
  std::string name;
  std::string guard_text;
  std::string formula_text;
  Predicate guard;        // on domain points
  PointMap forward;
  Predicate image_guard;  // on codomain points
  PointMap inverse;
};

/// A bijection given by guarded branches with explicit forward and inverse maps.
class PiecewiseMap {
 public:
  std::string name;
  std::string domain_text;
  std::string codomain_text;
  std::vector<Branch> branches;
  Predicate in_domain;
  Predicate in_codomain;
  PointDraw draw_domain;
  PointDraw draw_codomain;
  std::vector<TaggedPoint> domain_edge_cases;
  std::vector<TaggedPoint> codomain_edge_cases;
  /// Point that the map removes (e.g. 0 for R -> R \ {0}); never in the image.
  std::optional<TaggedPoint> removed_point;

  /// Index of the unique branch whose guard holds; PartitionError otherwise.
  std::size_t domain_branch(const TaggedPoint& p) const;
  std::size_t codomain_branch(const TaggedPoint& q) const;

  TaggedPoint evaluate(const TaggedPoint& p) const;
  TaggedPoint invert(const TaggedPoint& q) const;

  std::string describe() const;
  nlohmann::json to_json() const;

  /// Copy with the forward maps of two branches exchanged (mutation testing).
  PiecewiseMap with_swapped_forwards(std::size_t i, std::size_t j) const;
};

TaggedPoint point(const Element& x);
TaggedPoint point(std::string tag, std::vector<Element> coords);

// -- the maps ---------------------------------------------------------------

/// R + R1 -> R1: (R, x) -> 1 + pi x, (R1, x) -> pi x.
PiecewiseMap build_g1(std::shared_ptr<const Field> field);

enum class LemmaCarrier { Kx, Runit };
std::string carrier_name(LemmaCarrier c);

/// lambda copies of the carrier -> one copy, for a single exponent n.
class MergeStep {
 public:
  MergeStep(std::shared_ptr<const Field> field, std::uint32_t n, LemmaCarrier carrier);
  std::uint32_t n() const { return n_; }
  std::size_t copies() const { return lambda_; }
  Element merge(std::size_t copy, const Element& z) const;
  std::pair<std::size_t, Element> split(const Element& x) const;

 private:
  std::shared_ptr<const Field> field_;
  std::uint32_t n_;
  LemmaCarrier carrier_;
  PowerClasses classes_;
  std::size_t r_ = 1;
  std::size_t lambda_ = 1;
  std::vector<Element> reps_;
  std::int64_t digit_count_ = 1;  // n^d

  // R \ {0} -> (index, R cap P_n) and back
  std::pair<std::size_t, Element> decompose(const Element& x) const;
  Element recompose(std::size_t index, const Element& w) const;
};

/// m+1 copies of the carrier -> one copy, composed of merges and splits whose
/// (lambda - 1) values combine to m.
class MergeChain {
 public:
  MergeChain(std::shared_ptr<const Field> field, std::uint64_t m, LemmaCarrier carrier, std::uint32_t prime_bound = 97);
  std::uint64_t m() const { return m_; }
  Element forward(std::size_t copy, const Element& z) const;
  std::pair<std::size_t, Element> backward(const Element& x) const;
  /// (n, split?) in application order.
  std::vector<std::pair<std::uint32_t, bool>> operations() const;

 private:
  std::uint64_t m_;
  std::vector<std::shared_ptr<MergeStep>> steps_;
  std::vector<bool> is_split_;
  std::vector<std::size_t> pos_;  // first copy each step acts on
  // last backward() result; not safe to share one chain across threads
  mutable std::optional<std::pair<Element, std::pair<std::size_t, Element>>> last_backward_;

  std::pair<std::size_t, Element> backward_uncached(const Element& x) const;
};

PiecewiseMap build_lemma_map(std::shared_ptr<const Field> field, std::uint64_t m, LemmaCarrier carrier);

struct Prop1Maps {
  PiecewiseMap f;     // R -> R \ {0}
  PiecewiseMap kmap;  // K -> K^x
};
Prop1Maps build_prop1_maps(std::shared_ptr<const Field> field);

/// Two copies of (R\{0})^2 -> (R\{0})^2.
PiecewiseMap build_g2(std::shared_ptr<const Field> field);

/// Runs the point-absorption plan on tagged atom slots.
class PlanInterpreter {
 public:
  PlanInterpreter(std::shared_ptr<const Field> field, RewritePlan plan);
  /// (slot, values) in the start term -> (slot, values) in the end term.
  std::pair<std::size_t, std::vector<Element>> forward(std::size_t slot, std::vector<Element> values) const;
  std::pair<std::size_t, std::vector<Element>> backward(std::size_t slot, std::vector<Element> values) const;
  const RewritePlan& plan() const { return plan_; }

 private:
  std::shared_ptr<const Field> field_;
  RewritePlan plan_;
  std::pair<std::size_t, std::vector<Element>> witness(const std::string& rule, Direction dir, std::size_t q,
                                                         const std::vector<Element>& v) const;
};

/// R^2 -> R^2 \ {(0,0)}; `kmap` extends it by the identity to K^2.
struct Crit2Maps {
  PiecewiseMap map;
  PiecewiseMap kmap;
};
Crit2Maps build_crit2_map(std::shared_ptr<const Field> field);

/// (x, y) -> x^p + t1 y^p, injective on R^2 in characteristic p.
struct G4 {
  std::shared_ptr<const Field> field;
  Element forward(const Element& x, const Element& y) const;
  bool in_image(const Element& z) const;
  std::pair<Element, Element> inverse(const Element& z) const;
};
G4 make_g4(std::shared_ptr<const Field> field);
/// g4 as a map from R^2 onto its image.
PiecewiseMap build_g4(std::shared_ptr<const Field> field);

struct G5Maps {
  PiecewiseMap g5;    // R -> R \ {0}
  PiecewiseMap kmap;  // K -> K^x
};
G5Maps build_g5(std::shared_ptr<const Field> field);

}  // namespace valgroth
