#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valgroth/bijections.hpp"
#include "valgroth/field.hpp"

namespace valgroth {

struct Violation {
  std::size_t index = 0;  // sample index; replay with the same seed
  std::string check;
  std::string input;
  std::string detail;
};

/// Outcome of one suite on one tower.
struct SuiteReport {
  std::string suite;
  std::string field;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t skipped = 0;        // undecidable at the available precision
  std::size_t indeterminate = 0;  // collisions between bounded-precision outputs
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // the first few, in sample order
  std::optional<std::string> skip_reason;  // suite not applicable to this tower
  double seconds = 0;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const { return violation_count == 0; }
  bool not_applicable() const { return skip_reason.has_value(); }
  std::string status() const;
  void add_violation(Violation v);
  /// Wall time is left out unless asked for, so reports compare byte for byte.
  nlohmann::json to_json(bool with_time = false) const;
};

/// Valuation axioms, ac multiplicativity, ac = residue on units and M = pi R.
/// `shift_valuation` perturbs v on non-units to check that the suite notices.
SuiteReport check_axioms(std::shared_ptr<const Field> field, std::size_t samples, std::uint64_t seed,
                         bool shift_valuation = false);

/// Partition, forward range, removed point, injectivity and two-sided roundtrips.
SuiteReport check_bijection(const PiecewiseMap& map, std::size_t samples, std::uint64_t seed);

struct SuiteConfig {
  std::vector<std::string> fields = {"Q3((t1))"};  // shorthand names or JSON config paths
  std::vector<std::string> suites;                 // empty: all
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  std::uint32_t prime_bound = 97;
  std::vector<std::string> mutations;
  bool timing = false;

  nlohmann::json to_json() const;
};

SuiteConfig suite_config_from_json(const nlohmann::json& j);

const std::vector<std::string>& suite_names();
/// Mutation name -> the suite that is expected to catch it.
const std::vector<std::pair<std::string, std::string>>& mutation_targets();

/// One suite on one tower.  Suites that do not apply come back with a skip reason.
SuiteReport run_named_suite(const std::string& suite, std::shared_ptr<const Field> field, const SuiteConfig& cfg);

/// Every (field, suite) pair of the config, fields outermost.
std::vector<SuiteReport> run_suite(const SuiteConfig& cfg);

bool all_passed(const std::vector<SuiteReport>& reports);

}  // namespace valgroth
