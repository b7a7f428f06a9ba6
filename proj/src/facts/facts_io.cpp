#include "rtqa/facts/facts_io.hpp"

#include <fstream>

#include "rtqa/ontology/ontology.hpp"

namespace rtqa::facts {

namespace {

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

SchemaError::SchemaError(std::string p, std::string d)
    : Error((p.empty() ? std::string("(document)") : p) + ": " + d), pointer(std::move(p)), detail(std::move(d)) {}

std::vector<engine::Fact> facts_from_json(const json& doc, engine::Provenance provenance) {
  if (!doc.is_object()) throw SchemaError("", "facts must be a JSON object of dotted keys");
  std::vector<engine::Fact> out;
  for (const auto& [key, entry] : doc.items()) {
    const std::string where = "/" + escape_pointer(key);
    if (!is_valid_fact_key(key)) throw SchemaError(where, "fact key must be a dotted lowercase path");
    if (key.rfind(kPlanFactPrefix, 0) == 0) {
      throw SchemaError(where, "keys under 'plan.' are reserved for plan-derived facts");
    }
    const bool tnm = entry.is_object() && entry.contains("system") && entry.at("system").is_string() &&
                     to_upper(entry.at("system").get<std::string>()) == "TNM";
    if (tnm) {
      if (!entry.at("value").is_string()) throw SchemaError(where + "/value", "TNM stage must be a string");
      ontology::TnmStage stage;
      try {
        stage = ontology::parse_tnm(entry.at("value").get<std::string>());
      } catch (const ontology::MalformedStage& e) {
        throw SchemaError(where + "/value", e.what());
      }
      out.push_back({key, ontology::render_tnm(stage), provenance});
      out.push_back({key + ".t", ontology::tnm_t_concept(stage), provenance});
      out.push_back({key + ".n", ontology::tnm_n_concept(stage), provenance});
      out.push_back({key + ".m", ontology::tnm_m_concept(stage), provenance});
      continue;
    }
    Value value;
    try {
      value = value_from_json(entry, where);
    } catch (const SchemaError&) {
      throw;
    } catch (const Error& e) {
      throw SchemaError(where, e.what());
    }
    out.push_back({key, std::move(value), provenance});
  }
  return out;
}

engine::WorkingMemory working_memory_from_json(const json& doc) {
  engine::WorkingMemory wm;
  for (auto& f : facts_from_json(doc)) {
    try {
      wm.assert_fact(f);
    } catch (const engine::ContradictoryAssertion& e) {
      throw SchemaError("/" + escape_pointer(e.key), e.what());
    }
  }
  return wm;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", path.string() + ": " + e.what());
  }
}

engine::WorkingMemory load_facts(const std::filesystem::path& path) { return working_memory_from_json(read_json_file(path)); }

}  // namespace rtqa::facts
