#include "valgroth/ledger.hpp"

#include <algorithm>
#include <sstream>

#include "valgroth/errors.hpp"
#include "valgroth/power_classes.hpp"

namespace valgroth {

std::string atom_name(Atom a) {
  switch (a) {
    case Atom::Pt:
      return "Pt";
    case Atom::R:
      return "R";
    case Atom::Runit:
      return "Runit";
    case Atom::R1:
      return "R1";
    case Atom::RunitRunit:
      return "Runit*Runit";
    case Atom::R1Runit:
      return "R1*Runit";
  }
  return "?";
}

Atom parse_atom(const std::string& s) {
  for (Atom a : {Atom::Pt, Atom::R, Atom::Runit, Atom::R1, Atom::RunitRunit, Atom::R1Runit})
    if (atom_name(a) == s) return a;
  throw DomainError("unknown class atom '" + s + "'");
}

bool same_multiset(ClassTerm a, ClassTerm b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

std::string to_string(const ClassTerm& t) {
  std::string s = "{";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + atom_name(t[i]);
  return s + "}";
}

const std::vector<RewriteRule>& rewrite_rules() {
  using A = Atom;
  static const std::vector<RewriteRule> rules = {
      {"G1", {A::Pt, A::Runit, A::R1}, {A::R1}, "g1: (R, x) -> 1 + pi*x, (R1, x) -> pi*x"},
      {"G2", {A::RunitRunit, A::RunitRunit}, {A::RunitRunit}, "g2: (x, y) -> (x, x*y) | (pi*x*y, y)"},
      {"G1xS", {A::Runit, A::RunitRunit, A::R1Runit}, {A::R1Runit}, "g1 x identity on the second factor"},
      {"D1", {A::R}, {A::Pt, A::Runit}, "split R into {0} and R \\ {0}"},
      {"F", {A::R}, {A::Runit}, "f: R -> R \\ {0} built from the merge lemma"},
  };
  return rules;
}

const RewriteRule& find_rule(const std::string& name) {
  for (const auto& r : rewrite_rules())
    if (r.name == name) return r;
  throw DomainError("unknown rewrite rule '" + name + "'");
}

std::string direction_name(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::optional<std::vector<std::size_t>> find_embedding(const ClassTerm& term, const ClassTerm& source) {
  std::vector<bool> used(term.size(), false);
  std::vector<std::size_t> pos;
  for (Atom a : source) {
    bool found = false;
    for (std::size_t i = 0; i < term.size(); ++i) {
      if (!used[i] && term[i] == a) {
        used[i] = true;
        pos.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return pos;
}

ClassTerm apply_rule(const ClassTerm& term, const RewriteRule& rule, Direction dir, std::vector<std::size_t> position) {
  const ClassTerm& source = dir == Direction::Forward ? rule.left : rule.right;
  const ClassTerm& target = dir == Direction::Forward ? rule.right : rule.left;
  if (position.empty()) {
    auto emb = find_embedding(term, source);
    if (!emb) throw DomainError("rule " + rule.name + " (" + direction_name(dir) + ") does not embed in " + to_string(term));
    position = *emb;
  }
  if (position.size() != source.size()) throw DomainError("embedding has the wrong number of slots for rule " + rule.name);
  std::vector<bool> removed(term.size(), false);
  for (std::size_t i = 0; i < position.size(); ++i) {
    std::size_t slot = position[i];
    if (slot >= term.size() || removed[slot] || term[slot] != source[i])
      throw DomainError("rule " + rule.name + " does not embed in " + to_string(term) + " at the given position");
    removed[slot] = true;
  }
  ClassTerm out;
  for (std::size_t i = 0; i < term.size(); ++i)
    if (!removed[i]) out.push_back(term[i]);
  out.insert(out.end(), target.begin(), target.end());
  return out;
}

RewritePlan make_plan(std::string claim, ClassTerm start,
                      const std::vector<std::tuple<std::string, Direction, std::vector<std::size_t>>>& moves) {
  RewritePlan plan;
  plan.claim = std::move(claim);
  plan.start = start;
  ClassTerm cur = std::move(start);
  for (const auto& [name, dir, hint] : moves) {
    const RewriteRule& rule = find_rule(name);
    std::vector<std::size_t> pos = hint;
    if (pos.empty()) {
      auto emb = find_embedding(cur, dir == Direction::Forward ? rule.left : rule.right);
      if (!emb) throw DomainError("plan step " + name + " does not embed in " + to_string(cur));
      pos = *emb;
    }
    RewriteStep step{name, dir, pos, cur, apply_rule(cur, rule, dir, pos)};
    cur = step.after;
    plan.steps.push_back(std::move(step));
  }
  plan.end = cur;
  return plan;
}

bool replay(const RewritePlan& plan, std::string* error) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };
  ClassTerm cur = plan.start;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& s = plan.steps[i];
    if (cur != s.before) return fail("step " + std::to_string(i) + ": recorded source differs from replayed term");
    try {
      cur = apply_rule(cur, find_rule(s.rule), s.direction, s.position);
    } catch (const Error& e) {
      return fail("step " + std::to_string(i) + ": " + e.what());
    }
    if (cur != s.after) return fail("step " + std::to_string(i) + ": recorded result differs from replayed term");
  }
  if (!same_multiset(cur, plan.end)) return fail("replay ends at " + to_string(cur) + ", plan claims " + to_string(plan.end));
  return true;
}

RewritePlan plan_point_absorption() {
  using A = Atom;
  const auto F = Direction::Forward;
  const auto B = Direction::Backward;
  // Slot positions are explicit so the bijection interpreter can follow them.
  return make_plan("a point is absorbed by R1 + R1*Runit", {A::Pt, A::R1, A::R1Runit},
                   {
                       {"G1xS", B, {2}},        // R1*Runit -> Runit, Runit*Runit, R1*Runit
                       {"G1", F, {0, 2, 1}},    // Pt, Runit, R1 -> R1
                       {"G1xS", B, {1}},        // R1*Runit -> Runit, Runit*Runit, R1*Runit
                       {"G2", F, {0, 3}},       // Runit*Runit twice -> Runit*Runit
                       {"G1xS", F, {1, 3, 2}},  // Runit, Runit*Runit, R1*Runit -> R1*Runit
                   });
}

Route parse_route(const std::string& s) {
  if (s == "hkz" || s == "HKZ") return Route::HKZ;
  if (s == "crit2") return Route::Crit2;
  throw DomainError("unknown route '" + s + "' (expected hkz or crit2)");
}

std::vector<RewritePlan> derive_ring_trivial(const FieldDescriptor& d, Route route, std::uint32_t prime_bound) {
  using A = Atom;
  const auto F = Direction::Forward;
  const auto B = Direction::Backward;
  std::vector<RewritePlan> plans;
  plans.push_back(make_plan("[R] = 0: R is absorbed by R1", {A::R, A::R1}, {{"D1", F, {}}, {"G1", F, {}}}));
  if (route == Route::HKZ) {
    auto h = subgroup_H(d, prime_bound);
    if (h.generator != 1)
      throw DomainError("the merge-lemma route needs H = Z, but H = " + std::to_string(h.generator) + "Z for " + d.display_name());
    plans.push_back(make_plan("1 = 0: a point is absorbed by R + R1", {A::Pt, A::R, A::R1},
                              {{"F", F, {}}, {"G1", F, {}}, {"G1", B, {}}, {"D1", B, {}}}));
  } else {
    plans.push_back(make_plan("[Runit^2] + [Runit^2] = [Runit^2]", {A::RunitRunit, A::RunitRunit}, {{"G2", F, {}}}));
    plans.push_back(plan_point_absorption());
  }
  return plans;
}

std::string trace(const RewritePlan& plan) {
  std::ostringstream out;
  out << "claim: " << plan.claim << "\n";
  out << "start: " << to_string(plan.start) << "\n";
  for (const auto& s : plan.steps) {
    out << "  " << s.rule << " " << direction_name(s.direction) << " @[";
    for (std::size_t i = 0; i < s.position.size(); ++i) out << (i ? "," : "") << s.position[i];
    out << "]: " << to_string(s.before) << " -> " << to_string(s.after) << "\n";
  }
  out << "end:   " << to_string(plan.end) << "\n";
  return out.str();
}

nlohmann::json to_json(const RewritePlan& plan) {
  auto term = [](const ClassTerm& t) {
    nlohmann::json a = nlohmann::json::array();
    for (Atom x : t) a.push_back(atom_name(x));
    return a;
  };
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : plan.steps)
    steps.push_back({{"rule", s.rule},
                     {"direction", direction_name(s.direction)},
                     {"position", s.position},
                     {"witness", find_rule(s.rule).witness},
                     {"before", term(s.before)},
                     {"after", term(s.after)}});
  return {{"claim", plan.claim}, {"start", term(plan.start)}, {"end", term(plan.end)}, {"steps", steps}};
}

}  // namespace valgroth
