#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valgroth/field.hpp"

namespace valgroth {

/// Classes of definable sets appearing in the cancellation arguments.
enum class Atom { Pt, R, Runit, R1, RunitRunit, R1Runit };

std::string atom_name(Atom a);
Atom parse_atom(const std::string& s);

/// Ordered slots; identification is by multiset equality only.
using ClassTerm = std::vector<Atom>;

bool same_multiset(ClassTerm a, ClassTerm b);
std::string to_string(const ClassTerm& t);

struct RewriteRule {
  std::string name;
  ClassTerm left;
  ClassTerm right;
  std::string witness;  // name of the bijection constructor realising left <-> right
};

/// G1, G2, G1xS, D1 and the ring-level map F (R <-> R \ {0}).
const std::vector<RewriteRule>& rewrite_rules();
const RewriteRule& find_rule(const std::string& name);

enum class Direction { Forward, Backward };
std::string direction_name(Direction d);

/// Slots of `term` matching `source` in order, distinct; first fit when no hint.
std::optional<std::vector<std::size_t>> find_embedding(const ClassTerm& term, const ClassTerm& source);

/// Remove the slots at `position` (which must carry the rule's source atoms)
/// and append the target atoms.  Empty position: first embedding.
ClassTerm apply_rule(const ClassTerm& term, const RewriteRule& rule, Direction dir, std::vector<std::size_t> position = {});

struct RewriteStep {
  std::string rule;
  Direction direction = Direction::Forward;
  std::vector<std::size_t> position;
  ClassTerm before;
  ClassTerm after;
};

struct RewritePlan {
  std::string claim;
  ClassTerm start;
  ClassTerm end;
  std::vector<RewriteStep> steps;
};

/// Build a plan by applying (rule, direction, position) triples to `start`.
RewritePlan make_plan(std::string claim, ClassTerm start,
                      const std::vector<std::tuple<std::string, Direction, std::vector<std::size_t>>>& moves);

/// Re-run every step from `start`; checks recorded before/after terms and the end term.
bool replay(const RewritePlan& plan, std::string* error = nullptr);

/// {Pt, R1, R1*Runit} -> {R1, R1*Runit}: one point absorbed by R1 + R1*Runit.
RewritePlan plan_point_absorption();

enum class Route { HKZ, Crit2 };
Route parse_route(const std::string& s);

/// Plans establishing [R] = 0 and then 1 = 0.  HKZ needs H = Z.
std::vector<RewritePlan> derive_ring_trivial(const FieldDescriptor& d, Route route, std::uint32_t prime_bound = 97);

std::string trace(const RewritePlan& plan);
nlohmann::json to_json(const RewritePlan& plan);

}  // namespace valgroth
