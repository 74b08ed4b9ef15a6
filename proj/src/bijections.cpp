#include "valgroth/bijections.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "valgroth/errors.hpp"

namespace valgroth {

// ---------------------------------------------------------------------------
// Points and carriers

std::string TaggedPoint::to_string() const {
  std::string body;
  for (std::size_t i = 0; i < coords.size(); ++i) body += (i ? ", " : "") + coords[i].to_string();
  if (coords.size() != 1) body = "(" + body + ")";
  return tag.empty() ? body : tag + ":" + body;
}

bool TaggedPoint::is_exact() const {
  for (const auto& c : coords)
    if (!c.is_exact()) return false;
  return true;
}

bool identical(const TaggedPoint& a, const TaggedPoint& b) {
  if (a.tag != b.tag || a.coords.size() != b.coords.size()) return false;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (!a.coords[i].identical(b.coords[i])) return false;
  return true;
}

bool equal_at_precision(const TaggedPoint& a, const TaggedPoint& b) {
  if (a.tag != b.tag || a.coords.size() != b.coords.size()) return false;
  for (std::size_t i = 0; i < a.coords.size(); ++i)
    if (!a.coords[i].equal_at_precision(b.coords[i])) return false;
  return true;
}

TaggedPoint point(const Element& x) { return TaggedPoint{"", {x}}; }
TaggedPoint point(std::string tag, std::vector<Element> coords) { return TaggedPoint{std::move(tag), std::move(coords)}; }

bool in_ring(const Element& x) { return x.is_zero() || x.in_valuation_ring(); }
bool in_ring_nonzero(const Element& x) { return !x.is_zero() && x.in_valuation_ring(); }

bool in_ring_ac1(const Element& x) {
  if (!in_ring_nonzero(x)) return false;
  return x.angular_component() == x.field().base().residue_one();
}

bool valuation_at_least(const Element& x, const ValTuple& bound) { return x.is_zero() || x.valuation() >= bound; }

namespace {

SamplerSpec spec_for(SampleStrategy s) {
  SamplerSpec spec;
  spec.strategy = s;
  return spec;
}

const Element& only(const TaggedPoint& p) {
  if (p.coords.size() != 1) throw DomainError("expected a point with one coordinate: " + p.to_string());
  return p.coords[0];
}

void require_valued(const Field& K, const std::string& what) {
  if (!K.has_nontrivial_valuation()) throw DomainError(what + " needs a nontrivially valued field");
}

}  // namespace

PointSampler::PointSampler(std::shared_ptr<const Field> field, std::uint64_t seed)
    : field_(field),
      rng_(seed ^ 0x9e3779b97f4a7c15ULL),
      any_(field, spec_for(SampleStrategy::Random), seed),
      ring_(field, spec_for(SampleStrategy::Ring), seed + 1),
      ring_nonzero_(field, spec_for(SampleStrategy::RingNonzero), seed + 2),
      ring_ac1_(field, spec_for(SampleStrategy::RingAc1), seed + 3),
      unit_(field, spec_for(SampleStrategy::Unit), seed + 4) {}

Element PointSampler::any() { return any_.next(); }

Element PointSampler::nonzero() {
  for (;;) {
    Element x = any_.next();
    if (!x.is_zero()) return x;
  }
}

Element PointSampler::ring() { return ring_.next(); }
Element PointSampler::ring_nonzero() { return ring_nonzero_.next(); }
Element PointSampler::ring_ac1() { return ring_ac1_.next(); }
Element PointSampler::unit() { return unit_.next(); }

// ---------------------------------------------------------------------------
// PiecewiseMap

std::size_t PiecewiseMap::domain_branch(const TaggedPoint& p) const {
  if (in_domain && !in_domain(p)) throw DomainError(name + ": point outside the domain: " + p.to_string());
  std::vector<std::size_t> fired;
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (branches[i].guard(p)) fired.push_back(i);
  if (fired.size() != 1)
    throw PartitionError(name + ": " + std::to_string(fired.size()) + " guards fire at " + p.to_string());
  return fired.front();
}

std::size_t PiecewiseMap::codomain_branch(const TaggedPoint& q) const {
  if (in_codomain && !in_codomain(q)) throw DomainError(name + ": point outside the codomain: " + q.to_string());
  std::vector<std::size_t> fired;
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (branches[i].image_guard(q)) fired.push_back(i);
  if (fired.size() != 1)
    throw PartitionError(name + ": " + std::to_string(fired.size()) + " image guards fire at " + q.to_string());
  return fired.front();
}

TaggedPoint PiecewiseMap::evaluate(const TaggedPoint& p) const { return branches[domain_branch(p)].forward(p); }
TaggedPoint PiecewiseMap::invert(const TaggedPoint& q) const { return branches[codomain_branch(q)].inverse(q); }

std::string PiecewiseMap::describe() const {
  std::ostringstream os;
  os << name << ": " << domain_text << " -> " << codomain_text << "\n";
  for (const auto& b : branches) os << "  [" << b.name << "] if " << b.guard_text << ": " << b.formula_text << "\n";
  return os.str();
}

nlohmann::json PiecewiseMap::to_json() const {
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& b : branches) bs.push_back({{"name", b.name}, {"guard", b.guard_text}, {"formula", b.formula_text}});
  return {{"name", name}, {"domain", domain_text}, {"codomain", codomain_text}, {"branches", bs}};
}

PiecewiseMap PiecewiseMap::with_swapped_forwards(std::size_t i, std::size_t j) const {
  PiecewiseMap m = *this;
  std::swap(m.branches.at(i).forward, m.branches.at(j).forward);
  std::swap(m.branches[i].formula_text, m.branches[j].formula_text);
  m.name += " (forwards of " + branches[i].name + " and " + branches[j].name + " swapped)";
  return m;
}

// ---------------------------------------------------------------------------
// g1

PiecewiseMap build_g1(std::shared_ptr<const Field> field) {
  const Field& K = *field;
  require_valued(K, "g1");
  Element pi = K.uniformizer();
  Element one = K.one();
  ValTuple mp = ValTuple::min_positive(K.value_arity());

  PiecewiseMap m;
  m.name = "g1";
  m.domain_text = "R + R1";
  m.codomain_text = "R1";
  m.in_domain = [](const TaggedPoint& p) {
    if (p.coords.size() != 1) return false;
    if (p.tag == "R") return in_ring(p.coords[0]);
    if (p.tag == "R1") return in_ring_ac1(p.coords[0]);
    return false;
  };
  m.in_codomain = [](const TaggedPoint& q) { return q.tag.empty() && q.coords.size() == 1 && in_ring_ac1(q.coords[0]); };
  m.branches.push_back(Branch{
      "from R", "tag R", "x -> 1 + pi*x", [](const TaggedPoint& p) { return p.tag == "R"; },
      [pi, one](const TaggedPoint& p) { return point(one + pi * only(p)); },
      [one, mp](const TaggedPoint& q) { return valuation_at_least(only(q) - one, mp); },
      [pi, one](const TaggedPoint& q) { return point("R", {(only(q) - one) / pi}); }});
  m.branches.push_back(Branch{
      "from R1", "tag R1", "x -> pi*x", [](const TaggedPoint& p) { return p.tag == "R1"; },
      [pi](const TaggedPoint& p) { return point(pi * only(p)); },
      [mp](const TaggedPoint& q) { return !only(q).is_zero() && only(q).valuation() >= mp; },
      [pi](const TaggedPoint& q) { return point("R1", {only(q) / pi}); }});
  m.draw_domain = [](PointSampler& s) {
    return s.pick(0, 1) == 0 ? point("R", {s.ring()}) : point("R1", {s.ring_ac1()});
  };
  m.draw_codomain = [](PointSampler& s) { return point(s.ring_ac1()); };
  m.domain_edge_cases = {point("R", {K.zero()}), point("R", {one}), point("R", {pi}), point("R", {-one}),
                         point("R1", {one}), point("R1", {pi}), point("R1", {one + pi})};
  m.codomain_edge_cases = {point(one), point(pi), point(one + pi), point(pi * pi)};
  return m;
}

// ---------------------------------------------------------------------------
// Lemma: merging copies through power classes

std::string carrier_name(LemmaCarrier c) { return c == LemmaCarrier::Kx ? "K^x" : "R\\{0}"; }

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

MergeStep::MergeStep(std::shared_ptr<const Field> field, std::uint32_t n, LemmaCarrier carrier)
    : field_(field), n_(n), carrier_(carrier), classes_(field, n) {
  r_ = classes_.roots_of_unity().size();
  std::size_t s = classes_.index_count();
  if (s % r_ != 0) throw DomainError("r_n does not divide s_n for n = " + std::to_string(n));
  lambda_ = s / r_;
  const std::size_t d = field_->value_arity();
  digit_count_ = 1;
  for (std::size_t i = 0; i < d; ++i) digit_count_ *= n;
  if (carrier_ == LemmaCarrier::Kx) {
    reps_ = classes_.coset_representatives();
  } else if (d == 0) {
    throw DomainError("the R\\{0} carrier needs a nontrivial valuation");
  }
}

std::pair<std::size_t, Element> MergeStep::decompose(const Element& x) const {
  const Field& K = *field_;
  ValTuple g = x.valuation();
  std::vector<std::int64_t> c = g.coords();
  const std::int64_t N = digit_count_;
  std::int64_t e = c.back() - N * floor_div(c.back(), N);
  c.back() = floor_div(c.back(), N);
  ValTuple delta = static_cast<std::int64_t>(n_) * ValTuple(c);
  LeadingForm lf = leading_form(x);
  std::size_t jj = classes_.unit_class_of(lf.coef);
  const Coef& b = classes_.unit_representatives()[jj];
  Element w = K.monomial(delta) * (x / K.monomial(g)) / K.from_coef(b);
  return {jj * static_cast<std::size_t>(N) + static_cast<std::size_t>(e), w};
}

Element MergeStep::recompose(std::size_t index, const Element& w) const {
  const Field& K = *field_;
  const auto N = static_cast<std::size_t>(digit_count_);
  std::size_t jj = index / N;
  auto e = static_cast<std::int64_t>(index % N);
  ValTuple delta = w.valuation();
  if (!delta.divisible_by(n_)) throw DomainError("merge input is not an n-th power");
  std::vector<std::int64_t> c = delta.divided_by(n_).coords();
  c.back() = c.back() * digit_count_ + e;
  ValTuple g(c);
  const Coef& b = classes_.unit_representatives().at(jj);
  return K.monomial(g) * K.from_coef(b) * (w / K.monomial(delta));
}

Element MergeStep::merge(std::size_t copy, const Element& z) const {
  if (copy >= lambda_) throw DomainError("copy index out of range");
  if (z.is_zero()) throw DomainError("zero is not in the carrier");
  std::size_t i = copy * r_ + classes_.root_index_of(z);
  Element w = z.pow(n_);
  if (carrier_ == LemmaCarrier::Kx) return reps_[i] * w;
  return recompose(i, w);
}

std::pair<std::size_t, Element> MergeStep::split(const Element& x) const {
  if (x.is_zero()) throw DomainError("zero is not in the carrier");
  std::size_t i;
  Element w;
  if (carrier_ == LemmaCarrier::Kx) {
    i = classes_.class_of(x);
    w = x / reps_[i];
  } else {
    std::tie(i, w) = decompose(x);
  }
  Element y = nth_root(w, n_);
  return {i / r_, classes_.roots_of_unity()[i % r_] * y};
}

namespace {

// a*x + b*y = g
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = 1;
    y = 0;
    return a;
  }
  std::int64_t x1, y1;
  std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace

MergeChain::MergeChain(std::shared_ptr<const Field> field, std::uint64_t m, LemmaCarrier carrier, std::uint32_t prime_bound)
    : m_(m) {
  if (m == 0) throw DomainError("m must be positive");
  SubgroupH h = subgroup_H(field->descriptor(), prime_bound);
  if (h.generator == 0 || m % h.generator != 0)
    throw DomainError("m = " + std::to_string(m) + " is not in H = " + std::to_string(h.generator) + "Z");

  std::vector<std::pair<std::uint32_t, std::int64_t>> ws;
  for (auto [n, w] : h.witnesses)
    if (w > 0) ws.emplace_back(n, static_cast<std::int64_t>(w));
  std::vector<std::int64_t> coef(ws.size(), 0);
  std::int64_t g = 0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (g == 0) {
      g = ws[i].second;
      coef[i] = 1;
      continue;
    }
    std::int64_t s, t;
    std::int64_t g2 = ext_gcd(g, ws[i].second, s, t);
    for (std::size_t j = 0; j < i; ++j) coef[j] *= s;
    coef[i] = t;
    g = g2;
  }
  const auto scale = static_cast<std::int64_t>(m) / g;
  for (auto& c : coef) c *= scale;

  for (int pass = 0; pass < 2; ++pass) {
    const bool splits = pass == 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      std::int64_t count = splits ? -coef[i] : coef[i];
      if (count <= 0) continue;
      auto step = std::make_shared<MergeStep>(field, ws[i].first, carrier);
      for (std::int64_t c = 0; c < count; ++c) {
        steps_.push_back(step);
        is_split_.push_back(splits);
      }
    }
  }

  // block positions: splits take the last copy; merges sweep left to right in
  // rounds, so each point meets O(log) merges instead of all of them
  std::size_t count = m + 1, cursor = 0;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const std::size_t lam = steps_[i]->copies();
    if (is_split_[i]) {
      pos_.push_back(count - 1);
      count += lam - 1;
      continue;
    }
    if (count < lam) throw DomainError("merge chain ran out of copies");
    if (cursor + lam > count) cursor = 0;
    pos_.push_back(cursor);
    count -= lam - 1;
    cursor += 1;
  }
  if (count != 1) throw DomainError("merge chain does not end with one copy");
}

std::vector<std::pair<std::uint32_t, bool>> MergeChain::operations() const {
  std::vector<std::pair<std::uint32_t, bool>> out;
  for (std::size_t i = 0; i < steps_.size(); ++i) out.emplace_back(steps_[i]->n(), is_split_[i]);
  return out;
}

Element MergeChain::forward(std::size_t copy, const Element& z) const {
  if (copy > m_) throw DomainError("copy index out of range");
  Element x = z;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const MergeStep& st = *steps_[i];
    const std::size_t lam = st.copies(), at = pos_[i];
    if (is_split_[i]) {
      if (copy == at) {
        auto [c, y] = st.split(x);
        copy = at + c;
        x = y;
      } else if (copy > at) {
        copy += lam - 1;
      }
    } else {
      if (copy >= at && copy < at + lam) {
        x = st.merge(copy - at, x);
        copy = at;
      } else if (copy >= at + lam) {
        copy -= lam - 1;
      }
    }
  }
  return x;
}

std::pair<std::size_t, Element> MergeChain::backward(const Element& x) const {
  // image guards and the inverse ask for the same point in a row
  if (last_backward_ && last_backward_->first.identical(x)) return last_backward_->second;
  auto out = backward_uncached(x);
  last_backward_ = std::make_pair(x, out);
  return out;
}

std::pair<std::size_t, Element> MergeChain::backward_uncached(const Element& x) const {
  std::size_t copy = 0;
  Element z = x;
  for (std::size_t i = steps_.size(); i-- > 0;) {
    const MergeStep& st = *steps_[i];
    const std::size_t lam = st.copies(), at = pos_[i];
    if (is_split_[i]) {
      if (copy >= at && copy < at + lam) {
        z = st.merge(copy - at, z);
        copy = at;
      } else if (copy >= at + lam) {
        copy -= lam - 1;
      }
    } else {
      if (copy == at) {
        auto [c, y] = st.split(z);
        copy = at + c;
        z = y;
      } else if (copy > at) {
        copy += lam - 1;
      }
    }
  }
  return {copy, z};
}

PiecewiseMap build_lemma_map(std::shared_ptr<const Field> field, std::uint64_t m, LemmaCarrier carrier) {
  auto chain = std::make_shared<MergeChain>(field, m, carrier);
  const Field& K = *field;
  bool (*member)(const Element&) =
      carrier == LemmaCarrier::Kx ? +[](const Element& x) { return !x.is_zero(); } : &in_ring_nonzero;
  std::string cname = carrier_name(carrier);

  PiecewiseMap map;
  map.name = "lemma(m=" + std::to_string(m) + ", " + cname + ")";
  map.domain_text = std::to_string(m + 1) + " copies of " + cname;
  map.codomain_text = cname;
  map.in_domain = [m, member](const TaggedPoint& p) {
    if (p.coords.size() != 1 || p.tag.rfind("copy", 0) != 0) return false;
    try {
      if (std::stoull(p.tag.substr(4)) > m) return false;
    } catch (const std::exception&) {
      return false;
    }
    return member(p.coords[0]);
  };
  map.in_codomain = [member](const TaggedPoint& q) { return q.tag.empty() && q.coords.size() == 1 && member(q.coords[0]); };
  std::string ops;
  for (auto [n, split] : chain->operations()) ops += std::string(ops.empty() ? "" : ", ") + (split ? "split" : "merge") + std::to_string(n);
  for (std::size_t c = 0; c <= m; ++c) {
    std::string tag = "copy" + std::to_string(c);
    map.branches.push_back(Branch{
        tag, "tag " + tag, "chain [" + ops + "]", [tag](const TaggedPoint& p) { return p.tag == tag; },
        [chain, c](const TaggedPoint& p) { return point(chain->forward(c, only(p))); },
        [chain, c](const TaggedPoint& q) { return chain->backward(only(q)).first == c; },
        [chain](const TaggedPoint& q) {
          auto [copy, z] = chain->backward(only(q));
          return point("copy" + std::to_string(copy), {z});
        }});
  }
  map.draw_domain = [m, carrier](PointSampler& s) {
    std::string tag = "copy" + std::to_string(s.pick(0, static_cast<std::int64_t>(m)));
    return point(tag, {carrier == LemmaCarrier::Kx ? s.nonzero() : s.ring_nonzero()});
  };
  map.draw_codomain = [carrier](PointSampler& s) { return point(carrier == LemmaCarrier::Kx ? s.nonzero() : s.ring_nonzero()); };
  std::vector<Element> edges = {K.one(), K.from_int(-1), K.from_int(2)};
  if (K.has_nontrivial_valuation()) {
    edges.push_back(K.uniformizer());
    edges.push_back(K.one() + K.uniformizer());
    if (carrier == LemmaCarrier::Kx) edges.push_back(K.uniformizer().inverse());
  }
  for (std::size_t c = 0; c <= m; ++c)
    for (const auto& e : edges) map.domain_edge_cases.push_back(point("copy" + std::to_string(c), {e}));
  for (const auto& e : edges) map.codomain_edge_cases.push_back(point(e));
  return map;
}

// ---------------------------------------------------------------------------
// f : R -> R \ {0} and K -> K^x

namespace {

void require_full_H(const Field& K) {
  SubgroupH h = subgroup_H(K.descriptor());
  if (h.generator != 1) throw DomainError("H(K) is " + std::to_string(h.generator) + "Z, not Z");
}

// Adds the identity outside R (in every coordinate) to a map on R or R^k.
PiecewiseMap extend_outside_ring(PiecewiseMap m, std::string name, std::string domain, std::string codomain) {
  auto all_in_ring = [](const TaggedPoint& p) {
    for (const auto& c : p.coords)
      if (!in_ring(c)) return false;
    return true;
  };
  auto inner_dom = m.in_domain;
  auto inner_cod = m.in_codomain;
  auto arity = m.domain_edge_cases.empty() ? std::size_t{1} : m.domain_edge_cases.front().coords.size();
  m.name = std::move(name);
  m.domain_text = std::move(domain);
  m.codomain_text = std::move(codomain);
  m.in_domain = [inner_dom, all_in_ring, arity](const TaggedPoint& p) {
    if (p.coords.size() != arity) return false;
    return all_in_ring(p) ? inner_dom(p) : true;
  };
  m.in_codomain = [inner_cod, all_in_ring, arity](const TaggedPoint& q) {
    if (q.coords.size() != arity) return false;
    return all_in_ring(q) ? inner_cod(q) : true;
  };
  for (auto& b : m.branches) {
    auto g = b.guard;
    auto ig = b.image_guard;
    b.guard = [g, all_in_ring](const TaggedPoint& p) { return all_in_ring(p) && g(p); };
    b.image_guard = [ig, all_in_ring](const TaggedPoint& q) { return all_in_ring(q) && ig(q); };
  }
  auto outside = [all_in_ring](const TaggedPoint& p) { return !all_in_ring(p); };
  auto id = [](const TaggedPoint& p) { return p; };
  m.branches.push_back(Branch{"outside R", "some coordinate has v < 0", "identity", outside, id, outside, id});
  auto dd = m.draw_domain;
  auto dc = m.draw_codomain;
  // a quarter of the draws land outside R (in some coordinate)
  auto draw_outside = [all_in_ring, arity](PointSampler& s) {
    for (;;) {
      TaggedPoint p;
      for (std::size_t i = 0; i < arity; ++i) p.coords.push_back(s.any());
      if (!all_in_ring(p)) return p;
    }
  };
  m.draw_domain = [dd, draw_outside](PointSampler& s) { return s.pick(0, 3) != 0 ? dd(s) : draw_outside(s); };
  m.draw_codomain = [dc, draw_outside](PointSampler& s) { return s.pick(0, 3) != 0 ? dc(s) : draw_outside(s); };
  return m;
}

}  // namespace

Prop1Maps build_prop1_maps(std::shared_ptr<const Field> field) {
  const Field& K = *field;
  require_valued(K, "f");
  require_full_H(K);
  auto chain = std::make_shared<MergeChain>(field, 1, LemmaCarrier::Runit);
  const Element one = K.one();
  const Element pi = K.uniformizer();
  const Element pi2 = pi * pi;
  const Element pi3 = pi2 * pi;
  const ValTuple mp = ValTuple::min_positive(K.value_arity());
  const ValTuple mp2 = 2 * mp;
  const ValTuple mp3 = 3 * mp;

  // pieces of the domain
  auto in_A = [one, mp2](const Element& x) { Element u = x - one; return !u.is_zero() && u.valuation() >= mp2; };
  auto in_B = [mp2](const Element& x) { return valuation_at_least(x, mp2); };
  auto in_C = [pi, pi2, mp2](const Element& x) {
    Element u = x - pi;
    return !u.is_zero() && u.valuation() >= mp2 && in_ring_ac1(u / pi2);
  };
  // pieces of the image of B and C
  auto in_fB = [pi, pi2, mp3](const Element& y) { return valuation_at_least(y - pi - pi2, mp3); };
  auto in_fC = [pi, pi3, mp3](const Element& y) {
    Element u = y - pi;
    return !u.is_zero() && u.valuation() >= mp3 && in_ring_ac1(u / pi3);
  };

  PiecewiseMap f;
  f.name = "f";
  f.domain_text = "R";
  f.codomain_text = "R \\ {0}";
  f.in_domain = [](const TaggedPoint& p) { return p.tag.empty() && p.coords.size() == 1 && in_ring(p.coords[0]); };
  f.in_codomain = [](const TaggedPoint& q) { return q.tag.empty() && q.coords.size() == 1 && in_ring_nonzero(q.coords[0]); };
  f.branches.push_back(Branch{
      "f1", "x in 1 + pi^2 (R \\ {0})", "1 + pi^2 u -> pi^2 u' or 1 + pi^2 u', (copy, u') = split(u)",
      [in_A](const TaggedPoint& p) { return in_A(only(p)); },
      [chain, one, pi2](const TaggedPoint& p) {
        auto [c, u] = chain->backward((only(p) - one) / pi2);
        return point(c == 0 ? pi2 * u : one + pi2 * u);
      },
      [in_A, mp2](const TaggedPoint& q) {
        const Element& y = only(q);
        return (!y.is_zero() && y.valuation() >= mp2) || in_A(y);
      },
      [chain, one, pi2, mp2](const TaggedPoint& q) {
        const Element& y = only(q);
        bool low = y.valuation() >= mp2;
        Element u = chain->forward(low ? 0 : 1, low ? y / pi2 : (y - one) / pi2);
        return point(one + pi2 * u);
      }});
  f.branches.push_back(Branch{
      "f2 on pi^2 R", "v(x) >= 2 v(pi)", "x -> pi + pi^2 (1 + pi x / pi^2)",
      [in_B](const TaggedPoint& p) { return in_B(only(p)); },
      [one, pi, pi2](const TaggedPoint& p) { return point(pi + pi2 * (one + pi * only(p) / pi2)); },
      [in_fB](const TaggedPoint& q) { return in_fB(only(q)); },
      [pi, pi2](const TaggedPoint& q) { return point((only(q) - pi - pi2) / pi); }});
  f.branches.push_back(Branch{
      "f2 on pi + pi^2 R1", "x in pi + pi^2 R1", "pi + pi^2 x' -> pi + pi^3 x'",
      [in_C](const TaggedPoint& p) { return in_C(only(p)); },
      [pi, pi2, pi3](const TaggedPoint& p) { return point(pi + pi3 * ((only(p) - pi) / pi2)); },
      [in_fC](const TaggedPoint& q) { return in_fC(only(q)); },
      [pi, pi2, pi3](const TaggedPoint& q) { return point(pi + pi2 * ((only(q) - pi) / pi3)); }});
  f.branches.push_back(Branch{
      "else", "otherwise", "identity",
      [in_A, in_B, in_C](const TaggedPoint& p) {
        const Element& x = only(p);
        return !in_A(x) && !in_B(x) && !in_C(x);
      },
      [](const TaggedPoint& p) { return p; },
      [in_A, in_B, in_C](const TaggedPoint& q) {
        const Element& y = only(q);
        return !in_A(y) && !in_B(y) && !in_C(y);
      },
      [](const TaggedPoint& q) { return q; }});
  f.removed_point = point(K.zero());

  f.draw_domain = [one, pi, pi2](PointSampler& s) {
    switch (s.pick(0, 4)) {
      case 0: return point(one + pi2 * s.ring_nonzero());
      case 1: return point(pi2 * s.ring());
      case 2: return point(pi + pi2 * s.ring_ac1());
      default: return point(s.ring());
    }
  };
  f.draw_codomain = [one, pi, pi2, pi3](PointSampler& s) {
    switch (s.pick(0, 5)) {
      case 0: return point(one + pi2 * s.ring_nonzero());
      case 1: return point(pi2 * s.ring_nonzero());
      case 2: return point(pi + pi2 + pi3 * s.ring());
      case 3: return point(pi + pi3 * s.ring_ac1());
      default: return point(s.ring_nonzero());
    }
  };
  f.domain_edge_cases = {point(K.zero()), point(one),          point(-one),     point(pi),
                         point(pi2),      point(pi + pi2),     point(pi + pi3), point(one + pi2),
                         point(one + pi3), point(one + pi),    point(K.from_int(2)), point(pi2 + pi3)};
  f.codomain_edge_cases = {point(one), point(-one), point(pi), point(pi2), point(pi + pi2), point(pi + pi3), point(one + pi2),
                           point(one + pi)};

  Prop1Maps out{f, extend_outside_ring(f, "K -> K^x", "K", "K^x")};
  out.kmap.removed_point = point(K.zero());
  out.kmap.domain_edge_cases.push_back(point(pi.inverse()));
  out.kmap.codomain_edge_cases.push_back(point(pi.inverse()));
  return out;
}

// ---------------------------------------------------------------------------
// g2

PiecewiseMap build_g2(std::shared_ptr<const Field> field) {
  const Field& K = *field;
  require_valued(K, "g2");
  const Element pi = K.uniformizer();
  auto pair_ok = [](const TaggedPoint& p) {
    return p.coords.size() == 2 && in_ring_nonzero(p.coords[0]) && in_ring_nonzero(p.coords[1]);
  };
  PiecewiseMap m;
  m.name = "g2";
  m.domain_text = "two copies of (R\\{0})^2";
  m.codomain_text = "(R\\{0})^2";
  m.in_domain = [pair_ok](const TaggedPoint& p) { return (p.tag == "copy1" || p.tag == "copy2") && pair_ok(p); };
  m.in_codomain = [pair_ok](const TaggedPoint& q) { return q.tag.empty() && pair_ok(q); };
  m.branches.push_back(Branch{
      "copy1", "tag copy1", "(x, y) -> (x, x*y)", [](const TaggedPoint& p) { return p.tag == "copy1"; },
      [](const TaggedPoint& p) { return point("", {p.coords[0], p.coords[0] * p.coords[1]}); },
      [](const TaggedPoint& q) { return q.coords[0].valuation() <= q.coords[1].valuation(); },
      [](const TaggedPoint& q) { return point("copy1", {q.coords[0], q.coords[1] / q.coords[0]}); }});
  m.branches.push_back(Branch{
      "copy2", "tag copy2", "(x, y) -> (pi*x*y, y)", [](const TaggedPoint& p) { return p.tag == "copy2"; },
      [pi](const TaggedPoint& p) { return point("", {pi * p.coords[0] * p.coords[1], p.coords[1]}); },
      [](const TaggedPoint& q) { return q.coords[0].valuation() > q.coords[1].valuation(); },
      [pi](const TaggedPoint& q) { return point("copy2", {q.coords[0] / (pi * q.coords[1]), q.coords[1]}); }});
  m.draw_domain = [](PointSampler& s) {
    return point(s.pick(0, 1) ? "copy2" : "copy1", {s.ring_nonzero(), s.ring_nonzero()});
  };
  m.draw_codomain = [](PointSampler& s) { return point("", {s.ring_nonzero(), s.ring_nonzero()}); };
  Element one = K.one();
  for (const char* tag : {"copy1", "copy2"}) {
    m.domain_edge_cases.push_back(point(tag, {pi, pi}));
    m.domain_edge_cases.push_back(point(tag, {one, one}));
    m.domain_edge_cases.push_back(point(tag, {one, pi}));
    m.domain_edge_cases.push_back(point(tag, {pi, one}));
  }
  m.codomain_edge_cases = {point("", {pi, pi * pi}), point("", {one, one}), point("", {pi, one}), point("", {one, pi})};
  return m;
}

// ---------------------------------------------------------------------------
// Plan interpreter

PlanInterpreter::PlanInterpreter(std::shared_ptr<const Field> field, RewritePlan plan)
    : field_(std::move(field)), plan_(std::move(plan)) {
  std::string err;
  if (!replay(plan_, &err)) throw DomainError("plan does not replay: " + err);
}

namespace {

Direction flip(Direction d) { return d == Direction::Forward ? Direction::Backward : Direction::Forward; }

}  // namespace

// Maps the q-th source atom of `rule` in direction `dir` to (target atom index, values).
std::pair<std::size_t, std::vector<Element>> PlanInterpreter::witness(const std::string& rule, Direction dir, std::size_t q,
                                                                      const std::vector<Element>& v) const {
  const Field& K = *field_;
  const Element one = K.one();
  const Element pi = K.uniformizer();
  const ValTuple mp = ValTuple::min_positive(K.value_arity());
  const bool fwd = dir == Direction::Forward;

  if (rule == "G1") {  // {Pt, R\0, R1} <-> {R1}; R = Pt + R\0 feeds 1 + pi x
    if (fwd) {
      if (q == 0) return {0, {one}};
      if (q == 1) return {0, {one + pi * v.at(0)}};
      return {0, {pi * v.at(0)}};
    }
    const Element& y = v.at(0);
    if (valuation_at_least(y - one, mp)) {
      Element x = (y - one) / pi;
      if (x.is_zero()) return {0, {}};
      return {1, {x}};
    }
    return {2, {y / pi}};
  }
  if (rule == "G1xS") {  // (R + R1) x (R\0) -> R1 x (R\0), with R x (R\0) = {0} x (R\0) + (R\0)^2
    if (fwd) {
      if (q == 0) return {0, {one, v.at(0)}};
      if (q == 1) return {0, {one + pi * v.at(0), v.at(1)}};
      return {0, {pi * v.at(0), v.at(1)}};
    }
    const Element& a = v.at(0);
    if (valuation_at_least(a - one, mp)) {
      Element x = (a - one) / pi;
      if (x.is_zero()) return {0, {v.at(1)}};
      return {1, {x, v.at(1)}};
    }
    return {2, {a / pi, v.at(1)}};
  }
  if (rule == "G2") {  // two copies of (R\0)^2 -> (R\0)^2
    if (fwd) {
      if (q == 0) return {0, {v.at(0), v.at(0) * v.at(1)}};
      return {0, {pi * v.at(0) * v.at(1), v.at(1)}};
    }
    const Element& a = v.at(0);
    const Element& b = v.at(1);
    if (a.valuation() <= b.valuation()) return {0, {a, b / a}};
    return {1, {a / (pi * b), b}};
  }
  if (rule == "D1") {  // R <-> {0} + R\0
    if (fwd) {
      if (v.at(0).is_zero()) return {0, {}};
      return {1, {v.at(0)}};
    }
    if (q == 0) return {0, {K.zero()}};
    return {0, {v.at(0)}};
  }
  throw DomainError("no concrete witness for rule " + rule + " in the plan interpreter");
}

std::pair<std::size_t, std::vector<Element>> PlanInterpreter::forward(std::size_t slot, std::vector<Element> values) const {
  for (const RewriteStep& st : plan_.steps) {
    const auto& pos = st.position;
    const std::size_t kept = st.before.size() - pos.size();
    auto it = std::find(pos.begin(), pos.end(), slot);
    if (it != pos.end()) {
      auto [t, v] = witness(st.rule, st.direction, static_cast<std::size_t>(it - pos.begin()), values);
      slot = kept + t;
      values = std::move(v);
    } else {
      slot -= static_cast<std::size_t>(std::count_if(pos.begin(), pos.end(), [slot](std::size_t p) { return p < slot; }));
    }
  }
  return {slot, std::move(values)};
}

std::pair<std::size_t, std::vector<Element>> PlanInterpreter::backward(std::size_t slot, std::vector<Element> values) const {
  for (auto st = plan_.steps.rbegin(); st != plan_.steps.rend(); ++st) {
    const auto& pos = st->position;
    const std::size_t kept = st->before.size() - pos.size();
    if (slot >= kept) {
      auto [q, v] = witness(st->rule, flip(st->direction), slot - kept, values);
      slot = pos.at(q);
      values = std::move(v);
    } else {
      // slot-th surviving index of `before`
      std::size_t k = 0;
      for (std::size_t i = 0; i < st->before.size(); ++i) {
        if (std::find(pos.begin(), pos.end(), i) != pos.end()) continue;
        if (k++ == slot) {
          slot = i;
          break;
        }
      }
    }
  }
  return {slot, std::move(values)};
}

// ---------------------------------------------------------------------------
// R^2 -> R^2 \ {(0,0)}

Crit2Maps build_crit2_map(std::shared_ptr<const Field> field) {
  const Field& K = *field;
  require_valued(K, "the point removal map");
  auto interp = std::make_shared<PlanInterpreter>(field, plan_point_absorption());
  const Element one = K.one();
  const Element pi = K.uniformizer();
  const ValTuple mp = ValTuple::min_positive(K.value_arity());

  // Start term {Pt, R1, R1 x R\0}, end term {R1, R1 x R\0}, both placed as
  // (0,0), R1 x {1}, R1 x pi(R\0).
  auto place_start = [one, pi](std::size_t slot, const std::vector<Element>& v) -> std::pair<Element, Element> {
    if (slot == 1) return {v.at(0), one};
    return {v.at(0), pi * v.at(1)};
  };
  auto in_Y = [one, mp](const Element& x, const Element& y) {
    if (!in_ring_ac1(x)) return false;
    if (y.is_zero()) return false;
    return (y - one).is_zero() || y.valuation() >= mp;
  };
  auto unplace = [one, pi](const Element& x, const Element& y) -> std::pair<std::size_t, std::vector<Element>> {
    if ((y - one).is_zero()) return {0, {x}};
    return {1, {x, y / pi}};
  };
  auto in_pair = [](const TaggedPoint& p) { return p.tag.empty() && p.coords.size() == 2; };

  PiecewiseMap m;
  m.name = "point removal on R^2";
  m.domain_text = "R^2";
  m.codomain_text = "R^2 \\ {(0,0)}";
  m.in_domain = [in_pair](const TaggedPoint& p) { return in_pair(p) && in_ring(p.coords[0]) && in_ring(p.coords[1]); };
  m.in_codomain = [in_pair](const TaggedPoint& q) {
    return in_pair(q) && in_ring(q.coords[0]) && in_ring(q.coords[1]) && !(q.coords[0].is_zero() && q.coords[1].is_zero());
  };
  m.branches.push_back(Branch{
      "absorb", "(x,y) = (0,0) or x in R1 and (y = 1 or v(y) > 0, y != 0)", "point absorption plan",
      [in_Y](const TaggedPoint& p) {
        const Element& x = p.coords[0];
        const Element& y = p.coords[1];
        return (x.is_zero() && y.is_zero()) || in_Y(x, y);
      },
      [interp, place_start, unplace](const TaggedPoint& p) {
        const Element& x = p.coords[0];
        const Element& y = p.coords[1];
        std::size_t slot = 0;
        std::vector<Element> v;
        if (!(x.is_zero() && y.is_zero())) {
          auto [s, vals] = unplace(x, y);
          slot = s + 1;
          v = std::move(vals);
        }
        auto [end_slot, w] = interp->forward(slot, v);
        auto [a, b] = place_start(end_slot + 1, w);
        return point("", {a, b});
      },
      [in_Y](const TaggedPoint& q) { return in_Y(q.coords[0], q.coords[1]); },
      [interp, place_start, unplace, zero = K.zero()](const TaggedPoint& q) {
        auto [s, vals] = unplace(q.coords[0], q.coords[1]);
        auto [slot, v] = interp->backward(s, vals);
        if (slot == 0) return point("", {zero, zero});
        auto [a, b] = place_start(slot, v);
        return point("", {a, b});
      }});
  auto outside = [in_Y](const TaggedPoint& p) {
    const Element& x = p.coords[0];
    const Element& y = p.coords[1];
    return !(x.is_zero() && y.is_zero()) && !in_Y(x, y);
  };
  auto id = [](const TaggedPoint& p) { return p; };
  m.branches.push_back(Branch{"else", "otherwise", "identity", outside, id, outside, id});
  m.removed_point = point("", {K.zero(), K.zero()});

  m.draw_domain = [one, pi, zero = K.zero()](PointSampler& s) {
    switch (s.pick(0, 5)) {
      case 0: return point("", {zero, zero});
      case 1: return point("", {s.ring_ac1(), one});
      case 2: return point("", {s.ring_ac1(), pi * s.ring_nonzero()});
      default: return point("", {s.ring(), s.ring()});
    }
  };
  m.draw_codomain = [one, pi, zero = K.zero()](PointSampler& s) {
    switch (s.pick(0, 4)) {
      case 0: return point("", {s.ring_ac1(), one});
      case 1: return point("", {s.ring_ac1(), pi * s.ring_nonzero()});
      case 2: return point("", {zero, s.ring_nonzero()});
      default: return point("", {s.ring_nonzero(), s.ring()});
    }
  };
  const Element zero = K.zero();
  const Element two = K.from_int(2);
  m.domain_edge_cases = {point("", {zero, zero}), point("", {one, one}),   point("", {one, pi}),   point("", {pi, one}),
                         point("", {pi, pi}),     point("", {two, two}),   point("", {zero, one}), point("", {one, zero}),
                         point("", {one + pi, pi * pi})};
  m.codomain_edge_cases = {point("", {one, one}), point("", {one, pi}),   point("", {pi, one}),
                           point("", {pi, pi}),   point("", {zero, one}), point("", {one, zero})};

  Crit2Maps out{m, extend_outside_ring(m, "K^2 -> K^2 \\ {(0,0)}", "K^2", "K^2 \\ {(0,0)}")};
  out.kmap.domain_edge_cases.push_back(point("", {pi.inverse(), zero}));
  out.kmap.codomain_edge_cases.push_back(point("", {pi.inverse(), zero}));
  return out;
}

// ---------------------------------------------------------------------------
// g4 and g5

namespace {

std::int64_t mod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// Keeps the terms whose exponents are 0 mod p in every outer layer and `cls` mod p
// in t1.  Precision bounds are carried along.  `bad` is set when a term fits
// neither class.
Node filter_support(const Field& K, const Node& a, std::size_t d, std::int64_t p, std::int64_t cls, bool& bad) {
  if (d == 0) return a;
  Node out;
  out.bound = a.bound;
  for (const auto& [e, inner] : a.terms) {
    const std::int64_t r = mod(e, p);
    const std::int64_t want = d == 1 ? cls : 0;
    if (r != want) {
      if (r != 0 && !(d == 1 && r == 1)) bad = true;
      continue;
    }
    Node f = filter_support(K, inner, d - 1, p, cls, bad);
    if (!K.node_exact_zero(f, d - 1)) out.terms.emplace_back(e, std::move(f));
  }
  return out;
}

// (A, B) with z = A + B, A supported on pZ^k and B on pZ^k + e1; nullopt otherwise.
std::optional<std::pair<Element, Element>> split_support(const Element& z) {
  const Field& K = z.field();
  const auto p = static_cast<std::int64_t>(K.characteristic());
  bool bad = false;
  Element A = K.wrap(filter_support(K, z.node(), K.depth(), p, 0, bad));
  Element B = K.wrap(filter_support(K, z.node(), K.depth(), p, 1, bad));
  if (bad) return std::nullopt;
  return std::make_pair(A, B);
}

}  // namespace

G4 make_g4(std::shared_ptr<const Field> field) {
  if (field->characteristic() == 0) throw DomainError("g4 needs a tower of positive characteristic");
  if (field->depth() == 0) throw DomainError("g4 needs at least one Laurent layer");
  return G4{std::move(field)};
}

Element G4::forward(const Element& x, const Element& y) const {
  const auto p = static_cast<std::int64_t>(field->characteristic());
  return x.pow(p) + field->variable(1) * y.pow(p);
}

std::pair<Element, Element> G4::inverse(const Element& z) const {
  const Field& K = *field;
  auto parts = split_support(z);
  if (!parts) throw DomainError(z.to_string() + " is not in the image of g4");
  Element x = K.wrap(K.node_frobenius_root(parts->first.node(), K.depth()));
  Element y = K.wrap(K.node_frobenius_root((parts->second / K.variable(1)).node(), K.depth()));
  return {x, y};
}

bool G4::in_image(const Element& z) const {
  if (!split_support(z)) return false;
  auto [x, y] = inverse(z);
  return in_ring(x) && in_ring(y);
}

PiecewiseMap build_g4(std::shared_ptr<const Field> field) {
  auto g4 = std::make_shared<G4>(make_g4(field));
  const Field& K = *field;
  PiecewiseMap m;
  m.name = "g4";
  m.domain_text = "R^2";
  m.codomain_text = "g4(R^2)";
  m.in_domain = [](const TaggedPoint& p) {
    return p.tag.empty() && p.coords.size() == 2 && in_ring(p.coords[0]) && in_ring(p.coords[1]);
  };
  m.in_codomain = [g4](const TaggedPoint& q) { return q.tag.empty() && q.coords.size() == 1 && g4->in_image(q.coords[0]); };
  m.branches.push_back(Branch{
      "g4", "always", "(x, y) -> x^p + t1*y^p", [](const TaggedPoint&) { return true; },
      [g4](const TaggedPoint& p) { return point(g4->forward(p.coords[0], p.coords[1])); },
      [](const TaggedPoint&) { return true; },
      [g4](const TaggedPoint& q) {
        auto [x, y] = g4->inverse(only(q));
        return point("", {x, y});
      }});
  m.draw_domain = [](PointSampler& s) { return point("", {s.ring(), s.ring()}); };
  m.draw_codomain = [g4](PointSampler& s) { return point(g4->forward(s.ring(), s.ring())); };
  const Element zero = K.zero(), one = K.one(), t1 = K.variable(1);
  const Element outer = K.variable(K.depth());
  m.domain_edge_cases = {point("", {zero, zero}), point("", {one, zero}), point("", {zero, one}),
                         point("", {outer, one}), point("", {t1, t1})};
  for (const auto& p : m.domain_edge_cases) m.codomain_edge_cases.push_back(point(g4->forward(p.coords[0], p.coords[1])));
  return m;
}

G5Maps build_g5(std::shared_ptr<const Field> field) {
  auto g4 = std::make_shared<G4>(make_g4(field));
  auto F = std::make_shared<PiecewiseMap>(build_crit2_map(field).map);
  const Field& K = *field;

  PiecewiseMap m;
  m.name = "g5";
  m.domain_text = "R";
  m.codomain_text = "R \\ {0}";
  m.in_domain = [](const TaggedPoint& p) { return p.tag.empty() && p.coords.size() == 1 && in_ring(p.coords[0]); };
  m.in_codomain = [](const TaggedPoint& q) { return q.tag.empty() && q.coords.size() == 1 && in_ring_nonzero(q.coords[0]); };
  m.branches.push_back(Branch{
      "through g4", "x in g4(R^2)", "g4(F(g4^-1(x)))", [g4](const TaggedPoint& p) { return g4->in_image(only(p)); },
      [g4, F](const TaggedPoint& p) {
        auto [x, y] = g4->inverse(only(p));
        TaggedPoint r = F->evaluate(point("", {x, y}));
        return point(g4->forward(r.coords[0], r.coords[1]));
      },
      [g4](const TaggedPoint& q) { return !only(q).is_zero() && g4->in_image(only(q)); },
      [g4, F](const TaggedPoint& q) {
        auto [x, y] = g4->inverse(only(q));
        TaggedPoint r = F->invert(point("", {x, y}));
        return point(g4->forward(r.coords[0], r.coords[1]));
      }});
  auto outside = [g4](const TaggedPoint& p) { return !g4->in_image(only(p)); };
  auto id = [](const TaggedPoint& p) { return p; };
  m.branches.push_back(Branch{"else", "x not in g4(R^2)", "identity", outside, id, outside, id});
  m.removed_point = point(K.zero());
  m.draw_domain = [g4, keep = field](PointSampler& s) {
    switch (s.pick(0, 4)) {
      case 0: return point(keep->zero());
      case 1: return point(g4->forward(s.ring_ac1(), keep->one()));
      case 2: return point(g4->forward(s.ring(), s.ring()));
      default: return point(s.ring());
    }
  };
  m.draw_codomain = [g4, keep = field](PointSampler& s) {
    switch (s.pick(0, 3)) {
      case 0: return point(g4->forward(s.ring_ac1(), keep->one()));
      case 1: return point(g4->forward(s.ring_nonzero(), s.ring()));
      default: return point(s.ring_nonzero());
    }
  };
  const Element zero = K.zero(), one = K.one(), t1 = K.variable(1);
  m.domain_edge_cases = {point(zero), point(one), point(t1), point(t1 * t1), point(g4->forward(one, one)),
                         point(g4->forward(K.variable(K.depth()), one))};
  m.codomain_edge_cases = {point(one), point(t1), point(t1 * t1), point(g4->forward(one, one))};

  G5Maps out{m, extend_outside_ring(m, "K -> K^x (char p)", "K", "K^x")};
  out.kmap.domain_edge_cases.push_back(point(t1.inverse()));
  out.kmap.codomain_edge_cases.push_back(point(t1.inverse()));
  return out;
}

}  // namespace valgroth
