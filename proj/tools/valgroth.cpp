// Command-line front end: invariant tables, verification suites, formula evaluation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "valgroth/config.hpp"
#include "valgroth/errors.hpp"
#include "valgroth/formula.hpp"
#include "valgroth/power_classes.hpp"
#include "valgroth/verify.hpp"

using namespace valgroth;
using nlohmann::json;

namespace {

enum class Format { Table, Structured };

struct Common {
  std::string field = "Q3((t1))";
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  std::uint32_t prime_bound = 97;
  std::string format = "table";
  std::string out;
};

Format format_of(const Common& c) { return c.format == "structured" ? Format::Structured : Format::Table; }

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw ConfigError("cannot write " + c.out);
  f << text;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

// ---------------------------------------------------------------------------

int cmd_invariants(const Common& c) {
  FieldDescriptor d = resolve_field(c.field);
  std::vector<PowerClassReport> rows;
  for (std::uint32_t n = 2; n <= 12; ++n) rows.push_back(lambda_report(d, n));
  SubgroupH h = subgroup_H(d, c.prime_bound);

  if (format_of(c) == Format::Structured) {
    json j = {{"config", {{"field", descriptor_to_json(d)}, {"prime_bound", c.prime_bound}}}, {"rows", json::array()}};
    for (const auto& r : rows) j["rows"].push_back(to_json(r));
    j["H"] = to_json(h);
    emit(c, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream o;
  o << "field " << d.display_name() << "\n";
  o << pad("n", 4) << pad("r_n", 6) << pad("s_n", 8) << pad("lambda", 8) << "fallback\n";
  for (const auto& r : rows) {
    o << pad(std::to_string(r.n), 4) << pad(std::to_string(r.r_n), 6) << pad(r.s_n.to_string(), 8)
      << pad(std::to_string(r.lambda), 8) << (r.fallback ? "yes" : "no");
    if (r.fallback && !r.fallback_reason.empty()) o << "  (" << r.fallback_reason << ")";
    o << "\n";
  }
  o << "H: g=" << h.generator << " (primes up to " << h.prime_bound << ")";
  if (!h.witnesses.empty()) {
    o << " witnesses:";
    for (const auto& [n, v] : h.witnesses) o << " lambda_" << n << "-1=" << v;
  }
  o << "\n";
  if (h.note) o << "note: " << *h.note << "\n";
  emit(c, o.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string config;
  std::vector<std::string> fields;
  std::vector<std::string> suites;
  std::vector<std::string> mutations;
  bool timing = false;
};

int cmd_verify(const Common& c, const VerifyArgs& a, const CLI::App& sub) {
  SuiteConfig cfg;
  if (!a.config.empty()) {
    std::ifstream f(a.config);
    if (!f) throw ConfigError("cannot read " + a.config);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      throw ConfigError("malformed config " + a.config + ": " + e.what());
    }
    cfg = suite_config_from_json(j);
    // field files named in a config are relative to the config itself
    const std::filesystem::path dir = std::filesystem::path(a.config).parent_path();
    for (auto& f : cfg.fields) {
      std::error_code ec;
      std::filesystem::path candidate = (dir / f).lexically_normal();
      if (!std::filesystem::is_regular_file(f, ec) && std::filesystem::is_regular_file(candidate, ec))
        f = candidate.string();
    }
  }
  // flags given on the command line override the config file
  if (sub.count("--field")) cfg.fields = a.fields;
  if (sub.count("--suite")) cfg.suites = a.suites;
  if (sub.count("--mutate")) cfg.mutations = a.mutations;
  if (sub.count("--seed")) cfg.seed = c.seed;
  if (sub.count("--samples")) cfg.samples = c.samples;
  if (sub.count("--prime-bound")) cfg.prime_bound = c.prime_bound;
  if (a.timing) cfg.timing = true;

  std::vector<SuiteReport> reports = run_suite(cfg);
  const bool ok = all_passed(reports);

  if (format_of(c) == Format::Structured) {
    json j = {{"config", cfg.to_json()}, {"passed", ok}, {"reports", json::array()}};
    for (const auto& r : reports) j["reports"].push_back(r.to_json(cfg.timing));
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream o;
    o << pad("field", 18) << pad("suite", 13) << pad("status", 9) << pad("samples", 9) << pad("skipped", 9)
      << pad("indet", 7) << "violations";
    if (cfg.timing) o << "  time";
    o << "\n";
    for (const auto& r : reports) {
      o << pad(r.field, 18) << pad(r.suite, 13) << pad(r.status(), 9) << pad(std::to_string(r.samples), 9)
        << pad(std::to_string(r.skipped), 9) << pad(std::to_string(r.indeterminate), 7) << r.violation_count;
      if (cfg.timing) o << "  " << std::fixed << std::setprecision(2) << r.seconds << "s";
      if (r.skip_reason) o << "  (" << *r.skip_reason << ")";
      o << "\n";
      for (const auto& v : r.violations)
        o << "    #" << v.index << " " << v.check << ": " << v.input << (v.detail.empty() ? "" : "  " + v.detail) << "\n";
    }
    o << (ok ? "all suites passed" : "violations found") << "\n";
    emit(c, o.str());
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct FormulaArgs {
  std::string text;
  std::string builtin;
  std::string variable = "x";
  std::vector<std::string> points;
  bool trace = false;
};

int cmd_formula(const Common& c, const FormulaArgs& a) {
  auto field = Field::create(resolve_field(c.field));
  DefinableSet set;
  std::vector<std::string> notes;
  if (!a.builtin.empty()) {
    BuiltinSets b = builtin_sets(field);
    if (a.builtin == "R") set = b.ring;
    else if (a.builtin == "R1") set = b.ring_ac1;
    else throw ConfigError("--builtin takes R or R1");
    notes = b.notes;
  } else {
    if (a.text.empty()) throw ConfigError("give a formula or --builtin R|R1");
    set = DefinableSet{parse_formula(a.text, Signature{{a.variable}, field}), a.variable, field};
  }

  json rows = json::array();
  for (const auto& literal : a.points) {
    Element x = evaluate_term(parse_term(literal, Signature{{}, field}), *field, {});
    json row = {{"point", literal}, {"element", x.to_string()}};
    try {
      row["value"] = evaluate(set.formula, *field, {{set.variable, x}});
      if (a.trace) {
        json t = json::array();
        for (const auto& [atom, v] : atom_trace(set.formula, *field, {{set.variable, x}}))
          t.push_back({{"atom", atom}, {"value", v}});
        row["trace"] = t;
      }
    } catch (const PrecisionError& e) {
      row["value"] = nullptr;
      row["error"] = e.what();
    }
    rows.push_back(row);
  }

  if (format_of(c) == Format::Structured) {
    json j = {{"config", {{"field", descriptor_to_json(field->descriptor())}, {"variable", set.variable}}},
              {"formula", print(set.formula)},
              {"notes", notes},
              {"evaluations", rows}};
    emit(c, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream o;
  o << print(set.formula) << "\n";
  for (const auto& n : notes) o << "note: " << n << "\n";
  for (const auto& r : rows) {
    o << "  " << set.variable << " = " << r["point"].get<std::string>() << ": ";
    if (r["value"].is_null()) o << "undecided (" << r["error"].get<std::string>() << ")";
    else o << (r["value"].get<bool>() ? "true" : "false");
    o << "\n";
    if (r.contains("trace"))
      for (const auto& t : r["trace"]) o << "      " << (t["value"].get<bool>() ? "T " : "F ") << t["atom"].get<std::string>() << "\n";
  }
  emit(c, o.str());
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool sampling) {
  sub->add_option("--field", c.field, "tower shorthand such as Q3((t1)) or a JSON config path");
  sub->add_option("--format", c.format, "table or structured")->check(CLI::IsMember({"table", "structured"}));
  sub->add_option("--out", c.out, "write the report to this file");
  sub->add_option("--prime-bound", c.prime_bound, "largest prime used by the H sweep");
  if (sampling) {
    sub->add_option("--seed", c.seed, "sampler seed");
    sub->add_option("--samples", c.samples, "samples per suite");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valgroth: valued-field tower workbench"};
  app.require_subcommand(1);

  Common inv;
  auto* s_inv = app.add_subcommand("invariants", "power-class table for n <= 12 and the subgroup H");
  add_common(s_inv, inv, false);

  Common ver;
  VerifyArgs va;
  auto* s_ver = app.add_subcommand("verify", "run verification suites; exit 1 on any violation");
  s_ver->add_option("--prime-bound", ver.prime_bound, "largest prime used by the H sweep");
  s_ver->add_option("--format", ver.format, "table or structured")->check(CLI::IsMember({"table", "structured"}));
  s_ver->add_option("--out", ver.out, "write the report to this file");
  s_ver->add_option("--seed", ver.seed, "sampler seed");
  s_ver->add_option("--samples", ver.samples, "samples per suite");
  s_ver->add_option("--config", va.config, "JSON suite config");
  s_ver->add_option("--field", va.fields, "tower shorthand or JSON config path (repeatable)");
  s_ver->add_option("--suite", va.suites, "suite name (repeatable); default all");
  s_ver->add_option("--mutate", va.mutations, "inject a known defect (repeatable)");
  s_ver->add_flag("--timing", va.timing, "include wall time in reports");
  bool list = false;
  s_ver->add_flag("--list", list, "list suites and mutations");

  Common fc;
  FormulaArgs fa;
  auto* s_for = app.add_subcommand("formula", "evaluate a formula at points");
  add_common(s_for, fc, false);
  s_for->add_option("formula", fa.text, "formula text");
  s_for->add_option("--builtin", fa.builtin, "use the built-in definition R or R1");
  s_for->add_option("--var", fa.variable, "name of the free variable");
  s_for->add_option("--at", fa.points, "point to evaluate at, written as a term (repeatable)");
  s_for->add_flag("--trace", fa.trace, "print each atom's value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s_inv) return cmd_invariants(inv);
    if (*s_ver) {
      if (list) {
        std::cout << "suites:";
        for (const auto& s : suite_names()) std::cout << " " << s;
        std::cout << "\nmutations:\n";
        for (const auto& [m, t] : mutation_targets()) std::cout << "  " << pad(m, 24) << "caught by " << t << "\n";
        return 0;
      }
      return cmd_verify(ver, va, *s_ver);
    }
    if (*s_for) return cmd_formula(fc, fa);
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error at column " << e.column() << ": " << e.detail() << "\n";
    if (*s_for && !fa.text.empty()) std::cerr << "  " << fa.text << "\n  " << std::string(e.column() - 1, ' ') << "^\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
