#include "valgroth/config.hpp"

#include <filesystem>
#include <fstream>
#include <regex>

#include "valgroth/errors.hpp"

namespace valgroth {

using nlohmann::json;

FieldDescriptor parse_field_shorthand(const std::string& text) {
  static const std::regex shape(R"(^\s*(Q|F|R)(\d*)((?:\(\([A-Za-z_][A-Za-z0-9_]*\)\))*)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, shape)) throw ConfigError("unrecognised field name '" + text + "' (expected e.g. Q3((t1)))");
  FieldDescriptor d;
  const std::string kind = m[1];
  const std::string num = m[2];
  if (kind == "R") {
    if (!num.empty()) throw ConfigError("the real model takes no parameter: '" + text + "'");
    d.base = BaseKind::RealModel;
    d.p = 0;
  } else {
    if (num.empty()) throw ConfigError("missing prime or field order in '" + text + "'");
    auto value = static_cast<std::uint32_t>(std::stoul(num));
    if (kind == "Q") {
      d.base = BaseKind::PadicQ;
      d.p = value;
    } else {
      d.base = BaseKind::FiniteField;
      d.q = value;
    }
  }
  static const std::regex layer(R"(\(\(([A-Za-z_][A-Za-z0-9_]*)\)\))");
  const std::string layers = m[3];
  for (auto it = std::sregex_iterator(layers.begin(), layers.end(), layer); it != std::sregex_iterator(); ++it)
    d.layers.push_back((*it)[1]);
  d.apply_default_capabilities();
  // validate now so errors mention the input text
  try {
    (void)Field::create(d);
  } catch (const Error& e) {
    throw ConfigError("invalid field '" + text + "': " + e.what());
  }
  return d;
}

FieldDescriptor descriptor_from_json(const json& j) {
  try {
    FieldDescriptor d;
    d.name = j.value("name", "");
    const json& base = j.at("base");
    const std::string kind = base.at("kind");
    if (kind == "padic") {
      d.base = BaseKind::PadicQ;
      d.p = base.at("p");
      d.padic_precision = base.value("precision", std::int64_t{7});
    } else if (kind == "finite_field") {
      d.base = BaseKind::FiniteField;
      d.q = base.at("q");
    } else if (kind == "real_model") {
      d.base = BaseKind::RealModel;
      d.p = 0;
    } else {
      throw ConfigError("unknown base kind '" + kind + "'");
    }
    d.layers = j.value("layers", std::vector<std::string>{});
    d.cutoff = j.value("cutoff", std::int64_t{16});
    if (j.contains("root_capability") && !j["root_capability"].is_null()) {
      for (const auto& [key, cite] : j["root_capability"].items()) {
        std::uint32_t n = key == "all" ? 0 : static_cast<std::uint32_t>(std::stoul(key));
        d.root_capability[n] = cite.get<std::string>();
      }
    } else {
      d.apply_default_capabilities();
    }
    (void)Field::create(d);
    return d;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed field config: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("root_capability keys must be integers or \"all\"");
  }
}

json descriptor_to_json(const FieldDescriptor& d) {
  json base;
  switch (d.base) {
    case BaseKind::PadicQ:
      base = {{"kind", "padic"}, {"p", d.p}, {"precision", d.padic_precision}};
      break;
    case BaseKind::FiniteField:
      base = {{"kind", "finite_field"}, {"q", d.q}};
      break;
    case BaseKind::RealModel:
      base = {{"kind", "real_model"}};
      break;
  }
  json caps = json::object();
  for (const auto& [n, cite] : d.root_capability) caps[n == 0 ? "all" : std::to_string(n)] = cite;
  return {{"name", d.display_name()}, {"base", base}, {"layers", d.layers}, {"cutoff", d.cutoff}, {"root_capability", caps}};
}

FieldDescriptor load_field_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
  return descriptor_from_json(j);
}

FieldDescriptor resolve_field(const std::string& arg) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return load_field_config(arg);
  return parse_field_shorthand(arg);
}

}  // namespace valgroth
