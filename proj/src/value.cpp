#include "rtqa/value.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace rtqa {

std::string_view unit_suffix(Unit unit) {
  switch (unit) {
    case Unit::None: return "";
    case Unit::Gy: return "Gy";
    case Unit::Cc: return "cc";
    case Unit::Percent: return "%";
    case Unit::NgPerMl: return "ng/ml";
  }
  return "";
}

std::optional<Unit> parse_unit(std::string_view text) {
  if (text.empty()) return Unit::None;
  if (text == "Gy") return Unit::Gy;
  if (text == "cc") return Unit::Cc;
  if (text == "%") return Unit::Percent;
  if (text == "ng/ml") return Unit::NgPerMl;
  return std::nullopt;
}

std::string_view to_string(ConceptSystem system) {
  switch (system) {
    case ConceptSystem::Icdo: return "ICDO";
    case ConceptSystem::Tnm: return "TNM";
    case ConceptSystem::Struct: return "STRUCT";
    case ConceptSystem::Local: return "LOCAL";
  }
  return "LOCAL";
}

std::optional<ConceptSystem> parse_concept_system(std::string_view text) {
  const std::string upper = to_upper(text);
  if (upper == "ICDO") return ConceptSystem::Icdo;
  if (upper == "TNM") return ConceptSystem::Tnm;
  if (upper == "STRUCT") return ConceptSystem::Struct;
  if (upper == "LOCAL") return ConceptSystem::Local;
  return std::nullopt;
}

ConceptRef make_concept(ConceptSystem system, std::string_view code) {
  return ConceptRef{system, to_upper(code)};
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return std::to_string(value);
  return std::string(buf, end);
}

namespace {

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_value(const Value& value) {
  struct Visitor {
    std::string operator()(const Quantity& q) const {
      return format_number(q.value) + std::string(unit_suffix(q.unit));
    }
    std::string operator()(const std::string& s) const { return quote(s); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const ConceptRef& c) const {
      return "concept " + std::string(to_string(c.system)) + " " + quote(c.code);
    }
  };
  return std::visit(Visitor{}, value);
}

std::string_view type_name(const Value& value) {
  switch (value.index()) {
    case 0: return "number";
    case 1: return "string";
    case 2: return "boolean";
    default: return "concept";
  }
}

json value_to_json(const Value& value) {
  json j = json::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Quantity>) {
          j["value"] = v.value;
          if (v.unit != Unit::None) j["unit"] = std::string(unit_suffix(v.unit));
        } else if constexpr (std::is_same_v<T, ConceptRef>) {
          j["value"] = v.code;
          j["system"] = std::string(to_string(v.system));
        } else {
          j["value"] = v;
        }
      },
      value);
  return j;
}

Value value_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("value")) {
    throw Error(where + ": expected an object with a \"value\" member");
  }
  const json& v = j.at("value");
  if (j.contains("system")) {
    if (!v.is_string()) throw Error(where + "/value: concept code must be a string");
    auto system = parse_concept_system(j.at("system").get<std::string>());
    if (!system) throw Error(where + "/system: unknown concept system");
    return make_concept(*system, v.get<std::string>());
  }
  if (v.is_number()) {
    Unit unit = Unit::None;
    if (j.contains("unit")) {
      if (!j.at("unit").is_string()) throw Error(where + "/unit: must be a string");
      auto parsed = parse_unit(j.at("unit").get<std::string>());
      if (!parsed) throw Error(where + "/unit: unknown unit '" + j.at("unit").get<std::string>() + "'");
      unit = *parsed;
    }
    return Quantity{v.get<double>(), unit};
  }
  if (j.contains("unit")) throw Error(where + "/unit: only numbers carry units");
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) return v.get<std::string>();
  throw Error(where + "/value: unsupported value type");
}

std::string to_upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace rtqa
