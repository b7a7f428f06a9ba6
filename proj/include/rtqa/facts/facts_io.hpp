#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rtqa/engine/engine.hpp"
#include "rtqa/value.hpp"

namespace rtqa::facts {

// Malformed input document; `pointer` is the JSON pointer of the offending
// member ("" for the document itself).
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, std::string detail);

  // Same error with `prefix` prepended to the pointer.
  SchemaError rebased(const std::string& prefix) const { return SchemaError(prefix + pointer, detail); }

  std::string pointer;
  std::string detail;
};

// Keys under this prefix are answered from the plan, never from facts.json.
inline constexpr std::string_view kPlanFactPrefix = "plan.";

// facts.json: flat object of dotted keys to {value, unit?} or
// {value, system}. A TNM entry holding a full stage ("T2aN0M0") also
// yields <key>.t, <key>.n and <key>.m concept facts.
std::vector<engine::Fact> facts_from_json(const json& doc, engine::Provenance provenance = engine::Provenance::input());

engine::WorkingMemory working_memory_from_json(const json& doc);

json read_json_file(const std::filesystem::path& path);

engine::WorkingMemory load_facts(const std::filesystem::path& path);

}  // namespace rtqa::facts
