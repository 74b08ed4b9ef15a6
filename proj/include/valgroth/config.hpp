#pragma once

#include <string>

#include <json.hpp>

#include "valgroth/field.hpp"

namespace valgroth {

/// Parse a compact tower name such as "Q3((t1))", "F4((t1))((t2))" or "R((t1))".
FieldDescriptor parse_field_shorthand(const std::string& text);

/// Descriptor from the JSON schema documented in README.md.
FieldDescriptor descriptor_from_json(const nlohmann::json& j);
nlohmann::json descriptor_to_json(const FieldDescriptor& d);

FieldDescriptor load_field_config(const std::string& path);

/// A path to an existing JSON file, otherwise a shorthand name.
FieldDescriptor resolve_field(const std::string& arg);

}  // namespace valgroth
