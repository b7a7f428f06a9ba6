#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

namespace rtqa {

using json = nlohmann::ordered_json;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Units a numeric literal or fact may carry. Percent is a pure ratio.
enum class Unit { None, Gy, Cc, Percent, NgPerMl };

std::string_view unit_suffix(Unit unit);
std::optional<Unit> parse_unit(std::string_view text);

enum class ConceptSystem { Icdo, Tnm, Struct, Local };

std::string_view to_string(ConceptSystem system);
std::optional<ConceptSystem> parse_concept_system(std::string_view text);

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::None;

  friend bool operator==(const Quantity&, const Quantity&) = default;
};

// A reference to a coded concept. The code is always stored uppercase.
struct ConceptRef {
  ConceptSystem system = ConceptSystem::Local;
  std::string code;

  friend bool operator==(const ConceptRef&, const ConceptRef&) = default;
};

ConceptRef make_concept(ConceptSystem system, std::string_view code);

using Value = std::variant<Quantity, std::string, bool, ConceptRef>;

// Shortest decimal form that reads back to the same double.
std::string format_number(double value);

// Literal syntax as written in rule files: 10ng/ml, "text", true,
// concept ICDO "C61.9".
std::string format_value(const Value& value);

std::string_view type_name(const Value& value);

// {value, unit?} / {value, system} / {value}.
json value_to_json(const Value& value);

// Inverse of value_to_json. Throws Error naming `where` on malformed input.
Value value_from_json(const json& j, const std::string& where);

std::string to_upper(std::string_view text);
std::string to_lower(std::string_view text);

// 64-bit FNV-1a, used for content addressing.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace rtqa
