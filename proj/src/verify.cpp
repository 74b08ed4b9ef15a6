#include "valgroth/verify.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/formula.hpp"
#include "valgroth/ledger.hpp"
#include "valgroth/power_classes.hpp"
#include "valgroth/sampler.hpp"

namespace valgroth {

namespace {

constexpr std::size_t kKeptViolations = 20;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool residue_equal(const Residue& a, const Residue& b) { return a == b; }

}  // namespace

std::string SuiteReport::status() const {
  if (skip_reason) return "skipped";
  return passed() ? "pass" : "fail";
}

void SuiteReport::add_violation(Violation v) {
  ++violation_count;
  if (violations.size() < kKeptViolations) violations.push_back(std::move(v));
}

nlohmann::json SuiteReport::to_json(bool with_time) const {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : violations)
    vs.push_back({{"index", v.index}, {"check", v.check}, {"input", v.input}, {"detail", v.detail}});
  nlohmann::json j = {{"suite", suite},
                      {"field", field},
                      {"seed", seed},
                      {"status", status()},
                      {"samples", samples},
                      {"skipped", skipped},
                      {"indeterminate", indeterminate},
                      {"violation_count", violation_count},
                      {"violations", vs},
                      {"details", details}};
  if (skip_reason) j["reason"] = *skip_reason;
  if (with_time) j["wall_time_s"] = seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Axioms

SuiteReport check_axioms(std::shared_ptr<const Field> field, std::size_t samples, std::uint64_t seed,
                         bool shift_valuation) {
  const auto t0 = Clock::now();
  const Field& K = *field;
  SuiteReport rep;
  rep.suite = "axioms";
  rep.field = K.descriptor().display_name();
  rep.seed = seed;
  if (!K.has_nontrivial_valuation()) {
    rep.skip_reason = "trivially valued field";
    return rep;
  }
  const std::size_t d = K.value_arity();
  const ValTuple inf = ValTuple::infinity(d);
  const Element pi = K.uniformizer();
  const BaseField& B = K.base();

  auto v = [&](const Element& x) {
    if (x.is_zero()) return inf;
    ValTuple g = x.valuation();
    if (shift_valuation && !g.is_zero()) g = g + ValTuple::min_positive(d);
    return g;
  };

  SamplerSpec spec;
  spec.strategy = SampleStrategy::Boundary;
  Sampler sx(field, spec, seed);
  spec.strategy = SampleStrategy::Random;
  Sampler sy(field, spec, seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Element> ys = sx.boundary_cases();  // pair every edge case with every other one first
  const std::size_t edge = ys.size();

  if (!(v(pi) == ValTuple::min_positive(d)))
    rep.add_violation({0, "uniformizer", pi.to_string(), "v(pi) = " + v(pi).to_string()});

  for (std::size_t i = 0; i < samples; ++i) {
    const bool edge_pair = i < edge * edge;
    Element x = edge_pair ? ys[i % edge] : sx.next();
    Element y = edge_pair ? ys[i / edge] : sy.next();
    ++rep.samples;
    const std::string input = "x = " + x.to_string() + ", y = " + y.to_string();
    try {
      ValTuple vx = v(x), vy = v(y);
      // (i) v(x) = inf iff x = 0
      if (vx.is_infinite() != x.is_zero()) rep.add_violation({i, "v(x)=inf iff x=0", input, vx.to_string()});
      // (ii) v(xy) = v(x) + v(y), with inf absorbing
      ValTuple vxy = v(x * y);
      ValTuple sum = (vx.is_infinite() || vy.is_infinite()) ? inf : vx + vy;
      if (!(vxy == sum)) rep.add_violation({i, "v(xy)=v(x)+v(y)", input, vxy.to_string() + " vs " + sum.to_string()});
      // (iii) v(x + y) >= min(v(x), v(y))
      ValTuple vs = v(x + y);
      ValTuple lo = std::min(vx, vy);
      if (vs < lo) rep.add_violation({i, "v(x+y)>=min", input, vs.to_string() + " < " + lo.to_string()});
      // ac is multiplicative and ac(0) = 0
      Residue prod = B.residue_mul(x.angular_component(), y.angular_component());
      if (!residue_equal((x * y).angular_component(), prod))
        rep.add_violation({i, "ac(xy)=ac(x)ac(y)", input, ""});
      if (x.is_zero() && !B.residue_is_zero(x.angular_component())) rep.add_violation({i, "ac(0)=0", input, ""});
      // ac agrees with the residue map on units
      if (!x.is_zero() && vx.is_zero() && !residue_equal(x.angular_component(), x.residue()))
        rep.add_violation({i, "ac=res on units", input, ""});
      // M = pi R: positive valuation iff the quotient by pi is integral
      if (!x.is_zero()) {
        bool in_m = vx > ValTuple::zero(d);
        Element q = x / pi;
        bool divisible = v(q) >= ValTuple::zero(d);
        if (in_m != divisible) rep.add_violation({i, "M=piR", input, "v(x/pi) = " + v(q).to_string()});
      }
    } catch (const PrecisionError&) {
      ++rep.skipped;
    } catch (const DomainError& e) {
      rep.add_violation({i, "domain", input, e.what()});
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Bijections

SuiteReport check_bijection(const PiecewiseMap& map, std::size_t samples, std::uint64_t seed) {
  const auto t0 = Clock::now();
  SuiteReport rep;
  rep.suite = map.name;
  rep.seed = seed;

  std::shared_ptr<const Field> field;
  for (const auto& p : map.domain_edge_cases)
    if (!p.coords.empty()) field = p.coords[0].field_ptr();
  if (!field) throw DomainError("map '" + map.name + "' has no edge cases to learn its tower from");
  rep.field = field->descriptor().display_name();
  PointSampler sampler(field, seed);

  // forward images seen so far: canonical text -> (input text, exact?)
  std::unordered_map<std::string, std::pair<std::string, bool>> seen;
  std::size_t domain_points = 0, codomain_points = 0, exact_roundtrips = 0;

  const std::size_t ne = map.domain_edge_cases.size();
  const std::size_t nc = map.codomain_edge_cases.size();
  const std::size_t total = samples + std::max(ne, nc);

  for (std::size_t i = 0; i < total; ++i) {
    ++rep.samples;
    // domain side
    {
      TaggedPoint p = i < ne ? map.domain_edge_cases[i] : (i >= std::max(ne, nc) ? map.draw_domain(sampler) : TaggedPoint{});
      if (!p.tag.empty() || !p.coords.empty()) {
        ++domain_points;
        const std::string input = p.to_string();
        try {
          map.domain_branch(p);
          TaggedPoint q = map.evaluate(p);
          if (!map.in_codomain(q)) rep.add_violation({i, "range", input, "image " + q.to_string()});
          if (map.removed_point && identical(q, *map.removed_point))
            rep.add_violation({i, "removed point", input, "image " + q.to_string()});
          TaggedPoint back = map.invert(q);
          if (!equal_at_precision(back, p))
            rep.add_violation({i, "roundtrip", input, "image " + q.to_string() + " back " + back.to_string()});
          else if (p.is_exact() && q.is_exact()) {
            if (!identical(back, p))
              rep.add_violation({i, "exact roundtrip", input, "back " + back.to_string()});
            else
              ++exact_roundtrips;
          }
          const bool exact = q.is_exact();
          auto [it, fresh] = seen.emplace(q.to_string(), std::make_pair(input, exact));
          if (!fresh && it->second.first != input) {
            if (exact && it->second.second)
              rep.add_violation({i, "injectivity", input, "same image as " + it->second.first});
            else
              ++rep.indeterminate;
          }
        } catch (const PartitionError& e) {
          rep.add_violation({i, "partition", input, e.what()});
        } catch (const DomainError& e) {
          rep.add_violation({i, "domain", input, e.what()});
        } catch (const PrecisionError&) {
          ++rep.skipped;
        } catch (const RepresentationError&) {
          ++rep.skipped;
        }
      }
    }
    // codomain side
    {
      TaggedPoint q = i < nc ? map.codomain_edge_cases[i]
                             : (i >= std::max(ne, nc) ? map.draw_codomain(sampler) : TaggedPoint{});
      if (q.tag.empty() && q.coords.empty()) continue;
      ++codomain_points;
      const std::string input = q.to_string();
      try {
        map.codomain_branch(q);
        TaggedPoint p = map.invert(q);
        if (!map.in_domain(p)) rep.add_violation({i, "inverse range", input, "preimage " + p.to_string()});
        TaggedPoint again = map.evaluate(p);
        if (!equal_at_precision(again, q))
          rep.add_violation({i, "inverse roundtrip", input, "preimage " + p.to_string() + " image " + again.to_string()});
      } catch (const PartitionError& e) {
        rep.add_violation({i, "image partition", input, e.what()});
      } catch (const DomainError& e) {
        rep.add_violation({i, "inverse domain", input, e.what()});
      } catch (const PrecisionError&) {
        ++rep.skipped;
      } catch (const RepresentationError&) {
        ++rep.skipped;
      }
    }
  }
  rep.details = {{"domain_points", domain_points},
                 {"codomain_points", codomain_points},
                 {"exact_roundtrips", exact_roundtrips},
                 {"branches", map.branches.size()}};
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------------------
// Config

nlohmann::json SuiteConfig::to_json() const {
  return {{"fields", fields}, {"suites", suites},         {"seed", seed}, {"samples", samples},
          {"prime_bound", prime_bound}, {"mutations", mutations}};
}

SuiteConfig suite_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("suite config must be a JSON object");
  SuiteConfig c;
  static const std::vector<std::string> known = {"fields", "suites", "seed", "samples", "prime_bound", "mutations", "timing"};
  for (const auto& [k, _] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("unknown config key '" + k + "'");
  try {
    if (j.contains("fields")) {
      c.fields.clear();
      for (const auto& f : j.at("fields")) {
        if (f.is_string()) c.fields.push_back(f.get<std::string>());
        else c.fields.push_back(f.dump());  // inline descriptor
      }
    }
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
    if (j.contains("prime_bound")) c.prime_bound = j.at("prime_bound").get<std::uint32_t>();
    if (j.contains("mutations")) c.mutations = j.at("mutations").get<std::vector<std::string>>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed suite config: ") + e.what());
  }
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"axioms", "roots",  "oracle", "cosets", "g1",       "lemma-kx",
                                                 "lemma-runit", "f", "kmap",   "g2",     "crit2",    "g4",
                                                 "g5",     "formulas", "ledger"};
  return names;
}

const std::vector<std::pair<std::string, std::string>>& mutation_targets() {
  static const std::vector<std::pair<std::string, std::string>> m = {
      {"shift-valuation", "axioms"},
      {"root-times-uniformizer", "roots"},
      {"index-off-by-one", "oracle"},
      {"coset-off-by-one", "cosets"},
      {"swap-branches", "bijections"},
      {"drop-last-conjunct", "formulas"},
      {"drop-first-disjunct", "formulas"},
      {"tamper-plan", "ledger"},
  };
  return m;
}

// ---------------------------------------------------------------------------
// Individual suites

namespace {

bool has_mutation(const SuiteConfig& c, const std::string& m) {
  return std::find(c.mutations.begin(), c.mutations.end(), m) != c.mutations.end();
}

SuiteReport blank(const std::string& suite, const Field& K, const SuiteConfig& cfg) {
  SuiteReport r;
  r.suite = suite;
  r.field = K.descriptor().display_name();
  r.seed = cfg.seed;
  return r;
}

std::vector<std::uint32_t> root_exponents(const Field& K) {
  std::vector<std::uint32_t> ns = {2, 3, 5};
  // exponents divisible by the characteristic are handled by Frobenius and are cheap
  if (K.characteristic() != 0 && std::find(ns.begin(), ns.end(), K.characteristic()) == ns.end())
    ns.push_back(K.characteristic());
  return ns;
}

SuiteReport run_roots(std::shared_ptr<const Field> field, const SuiteConfig& cfg) {
  const Field& K = *field;
  SuiteReport r = blank("roots", K, cfg);
  const bool mutated = has_mutation(cfg, "root-times-uniformizer");
  SamplerSpec spec;
  spec.strategy = SampleStrategy::Boundary;
  Sampler s(field, spec, cfg.seed);
  const auto ns = root_exponents(K);
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Element x = s.next();
    const std::uint32_t n = ns[i % ns.size()];
    ++r.samples;
    if (x.is_zero()) continue;
    const std::string input = "n = " + std::to_string(n) + ", x = " + x.to_string();
    try {
      Element y = x.pow(n);
      if (!is_nth_power(y, n)) {
        r.add_violation({i, "x^n is an n-th power", input, ""});
        continue;
      }
      Element z = nth_root(y, n);
      if (mutated && K.has_nontrivial_valuation()) z = z * K.uniformizer();
      if (!z.pow(n).equal_at_precision(y)) r.add_violation({i, "root^n = x^n", input, "root " + z.to_string()});
      // the canonical root does not depend on which root of y we started from
      if (!nth_root(z.pow(n), n).equal_at_precision(z)) r.add_violation({i, "canonical root is stable", input, ""});
    } catch (const PrecisionError&) {
      ++r.skipped;
    } catch (const RepresentationError&) {
      ++r.skipped;
    }
  }
  return r;
}

FieldDescriptor base_of(const FieldDescriptor& d) {
  FieldDescriptor b = d;
  b.layers.clear();
  b.name.clear();
  return b;
}

SuiteReport run_oracle(std::shared_ptr<const Field> field, const SuiteConfig& cfg) {
  const Field& K = *field;
  SuiteReport r = blank("oracle", K, cfg);
  if (K.base().kind() == BaseKind::RealModel) {
    r.skip_reason = "no finite enumeration exists for the real model";
    return r;
  }
  const bool mutated = has_mutation(cfg, "index-off-by-one");
  FieldDescriptor b = base_of(K.descriptor());
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint32_t n = 1; n <= 12; ++n) {
    ++r.samples;
    std::uint64_t rs = roots_of_unity_count(b, n);
    Index ss = power_index(b, n);
    std::uint64_t rb = brute_roots_of_unity(b, n);
    std::uint64_t sb = brute_power_index(b, n);
    std::uint64_t structural = ss.value.value_or(0) + (mutated && n == 2 ? 1 : 0);
    const std::string input = "n = " + std::to_string(n);
    if (rs != rb) r.add_violation({n, "r_n", input, std::to_string(rs) + " vs " + std::to_string(rb)});
    if (ss.infinite() || structural != sb)
      r.add_violation({n, "s_n", input, ss.to_string() + " vs " + std::to_string(sb)});
    rows.push_back({{"n", n}, {"r_n", rs}, {"s_n", ss.to_string()}, {"brute_r_n", rb}, {"brute_s_n", sb}});
  }
  r.details = {{"base", b.display_name()}, {"rows", rows}};
  return r;
}

SuiteReport run_cosets(std::shared_ptr<const Field> field, const SuiteConfig& cfg) {
  const Field& K = *field;
  SuiteReport r = blank("cosets", K, cfg);
  const bool mutated = has_mutation(cfg, "coset-off-by-one");
  SamplerSpec spec;
  spec.strategy = SampleStrategy::Boundary;
  Sampler s(field, spec, cfg.seed);
  nlohmann::json counts = nlohmann::json::object();
  for (std::uint32_t n : {2u, 3u}) {
    if (K.characteristic() == n) continue;  // infinite index
    PowerClasses pc(field, n);
    std::vector<Element> reps = pc.coset_representatives();
    if (mutated) reps.pop_back();
    counts[std::to_string(n)] = reps.size();
    if (reps.size() != pc.index_count())
      r.add_violation({0, "coset count", "n = " + std::to_string(n),
                       std::to_string(reps.size()) + " representatives for index " + std::to_string(pc.index_count())});
    // representatives lie in distinct classes
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (pc.class_of(reps[i]) != i)
        r.add_violation({i, "representative class", reps[i].to_string(), "class " + std::to_string(pc.class_of(reps[i]))});
    for (std::size_t i = 0; i < cfg.samples / 2; ++i) {
      Element x = s.next();
      ++r.samples;
      if (x.is_zero()) continue;
      const std::string input = "n = " + std::to_string(n) + ", x = " + x.to_string();
      try {
        std::size_t c = pc.class_of(x);
        if (c >= reps.size()) {
          r.add_violation({i, "class in range", input, "class " + std::to_string(c)});
          continue;
        }
        if (!is_nth_power(x / reps[c], n)) r.add_violation({i, "x / rep is an n-th power", input, ""});
      } catch (const PrecisionError&) {
        ++r.skipped;
      } catch (const RepresentationError&) {
        ++r.skipped;
      }
    }
  }
  r.details = {{"representatives", counts}};
  return r;
}

SuiteReport run_formulas(std::shared_ptr<const Field> field, const SuiteConfig& cfg) {
  const Field& K = *field;
  SuiteReport r = blank("formulas", K, cfg);
  BuiltinSets b;
  try {
    b = builtin_sets(field);
  } catch (const DomainError& e) {
    r.skip_reason = e.what();
    return r;
  }
  if (has_mutation(cfg, "drop-last-conjunct"))
    b.ring.formula = mutate(b.ring.formula, FormulaMutation::DropLastConjunct);
  if (has_mutation(cfg, "drop-first-disjunct"))
    b.ring_ac1.formula = mutate(b.ring_ac1.formula, FormulaMutation::DropFirstDisjunct);
  nlohmann::json parts = nlohmann::json::object();
  auto run = [&](const char* name, const DefinableSet& set, const SemanticPredicate& pred, std::uint64_t seed) {
    EquivalenceReport e = check_equivalence(set, pred, cfg.samples, seed);
    r.samples += e.samples;
    r.skipped += e.skipped;
    for (const auto& c : e.counterexamples)
      r.add_violation({c.index, std::string(name) + " membership", c.element,
                       std::string("formula ") + (c.formula_value ? "true" : "false") + ", semantics " +
                           (c.predicate_value ? "true" : "false")});
    parts[name] = {{"formula", print(set.formula)}, {"boundary_cases", e.boundary_cases}};
  };
  run("R", b.ring, semantic_ring, cfg.seed);
  run("R1", b.ring_ac1, semantic_ring_ac1, cfg.seed + 1);
  parts["notes"] = b.notes;
  r.details = parts;
  return r;
}

SuiteReport run_ledger(std::shared_ptr<const Field> field, const SuiteConfig& cfg) {
  const Field& K = *field;
  SuiteReport r = blank("ledger", K, cfg);
  const bool tamper = has_mutation(cfg, "tamper-plan");
  nlohmann::json routes = nlohmann::json::object();
  auto check = [&](RewritePlan plan, const std::string& label) {
    if (tamper && plan.steps.size() > 1) plan.steps[1].after.push_back(Atom::Pt);
    ++r.samples;
    std::string err;
    if (!replay(plan, &err)) r.add_violation({r.samples - 1, "replay", label, err});
  };
  check(plan_point_absorption(), "point absorption");
  for (Route route : {Route::HKZ, Route::Crit2}) {
    const std::string name = route == Route::HKZ ? "hkz" : "crit2";
    try {
      auto plans = derive_ring_trivial(K.descriptor(), route, cfg.prime_bound);
      for (std::size_t i = 0; i < plans.size(); ++i) check(plans[i], name + " plan " + std::to_string(i));
      routes[name] = plans.size();
    } catch (const DomainError& e) {
      routes[name] = std::string("not applicable: ") + e.what();
    }
  }
  r.details = {{"routes", routes}};
  return r;
}

std::optional<PiecewiseMap> bijection_for(const std::string& suite, std::shared_ptr<const Field> field,
                                           std::string& reason) {
  try {
    if (suite == "g1") return build_g1(field);
    if (suite == "lemma-kx") return build_lemma_map(field, 1, LemmaCarrier::Kx);
    if (suite == "lemma-runit") return build_lemma_map(field, 1, LemmaCarrier::Runit);
    if (suite == "f") return build_prop1_maps(field).f;
    if (suite == "kmap") {
      if (field->characteristic() != 0) return build_g5(field).kmap;
      return build_prop1_maps(field).kmap;
    }
    if (suite == "g2") return build_g2(field);
    if (suite == "crit2") return build_crit2_map(field).map;
    if (suite == "g4") return build_g4(field);
    if (suite == "g5") return build_g5(field).g5;
  } catch (const DomainError& e) {
    reason = e.what();
    return std::nullopt;
  }
  throw DomainError("unknown suite '" + suite + "'");
}

}  // namespace

SuiteReport run_named_suite(const std::string& suite, std::shared_ptr<const Field> field, const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteReport r;
  if (suite == "axioms") r = check_axioms(field, cfg.samples, cfg.seed, has_mutation(cfg, "shift-valuation"));
  else if (suite == "roots") r = run_roots(field, cfg);
  else if (suite == "oracle") r = run_oracle(field, cfg);
  else if (suite == "cosets") r = run_cosets(field, cfg);
  else if (suite == "formulas") r = run_formulas(field, cfg);
  else if (suite == "ledger") r = run_ledger(field, cfg);
  else if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw ConfigError("unknown suite '" + suite + "'");
  } else {
    std::string reason;
    auto map = bijection_for(suite, field, reason);
    if (!map) {
      r = blank(suite, *field, cfg);
      r.skip_reason = reason;
    } else {
      if (has_mutation(cfg, "swap-branches") && map->branches.size() >= 2) *map = map->with_swapped_forwards(0, 1);
      r = check_bijection(*map, cfg.samples, cfg.seed);
      r.suite = suite;
    }
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<SuiteReport> run_suite(const SuiteConfig& cfg) {
  for (const auto& m : cfg.mutations) {
    const auto& t = mutation_targets();
    if (std::none_of(t.begin(), t.end(), [&](const auto& e) { return e.first == m; }))
      throw ConfigError("unknown mutation '" + m + "'");
  }
  const std::vector<std::string>& suites = cfg.suites.empty() ? suite_names() : cfg.suites;
  for (const auto& s : suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("unknown suite '" + s + "'");
  if (cfg.fields.empty()) throw ConfigError("config names no fields");

  std::vector<SuiteReport> out;
  for (const auto& name : cfg.fields) {
    FieldDescriptor d;
    if (!name.empty() && name.front() == '{') d = descriptor_from_json(nlohmann::json::parse(name));
    else d = resolve_field(name);
    auto field = Field::create(d);
    for (const auto& s : suites) out.push_back(run_named_suite(s, field, cfg));
  }
  return out;
}

bool all_passed(const std::vector<SuiteReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const SuiteReport& r) { return r.passed(); });
}

}  // namespace valgroth
