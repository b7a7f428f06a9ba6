#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtqa/value.hpp"

namespace rtqa::ontology {

struct ConceptCode {
  std::string code;  // uppercase
  ConceptSystem system = ConceptSystem::Local;
  std::string display;

  friend bool operator==(const ConceptCode&, const ConceptCode&) = default;
};

struct TnmStage {
  std::string t;  // digit + optional lowercase letter, e.g. "2a"
  std::string n;  // single digit
  std::string m;  // single digit

  friend bool operator==(const TnmStage&, const TnmStage&) = default;
};

struct NomenclatureRule {
  std::string canonical_name;
  std::optional<std::string> expected_color;  // normalized palette name
  std::vector<std::string> aliases;
};

class MalformedStage : public Error {
 public:
  using Error::Error;
};

class UnknownConcept : public Error {
 public:
  UnknownConcept(ConceptSystem system, std::string code, std::vector<std::string> suggestions);

  ConceptSystem system;
  std::string code;
  std::vector<std::string> suggestions;
};

class UnknownStructureName : public Error {
 public:
  explicit UnknownStructureName(const std::string& raw)
      : Error("unknown structure name '" + raw + "'"), raw_name(raw) {}

  std::string raw_name;
};

TnmStage parse_tnm(std::string_view text);
std::string render_tnm(const TnmStage& stage);

// "T2a" / "N0" / "M0" components as TNM concept references.
ConceptRef tnm_t_concept(const TnmStage& stage);
ConceptRef tnm_n_concept(const TnmStage& stage);
ConceptRef tnm_m_concept(const TnmStage& stage);

// Lowercase, single-spaced name ("Dark_Blue" -> "dark blue"); nullopt if
// the result is not in the fixed palette.
std::optional<std::string> normalize_color(std::string_view raw);
const std::vector<std::string>& color_palette();

std::string canonical_structure_name(const std::vector<NomenclatureRule>& table, std::string_view raw);

// Immutable after construction.
class Ontology {
 public:
  Ontology() = default;
  // Throws Error on duplicate (system, code) pairs, duplicate canonical
  // names or aliases, or colors outside the palette.
  Ontology(std::vector<ConceptCode> concepts, std::vector<NomenclatureRule> nomenclature);

  static Ontology from_json(const json& j);
  static Ontology load(const std::filesystem::path& path);
  json to_json() const;

  const ConceptCode& resolve(ConceptSystem system, std::string_view code) const;
  bool contains(ConceptSystem system, std::string_view code) const;

  const std::vector<ConceptCode>& concepts() const { return concepts_; }
  const std::vector<NomenclatureRule>& nomenclature() const { return nomenclature_; }

  std::string canonical_structure_name(std::string_view raw) const;
  const NomenclatureRule* find_nomenclature(std::string_view canonical) const;

 private:
  std::vector<ConceptCode> concepts_;
  std::vector<NomenclatureRule> nomenclature_;
  std::map<std::pair<ConceptSystem, std::string>, std::size_t> index_;
};

const ConceptCode& resolve_concept(const Ontology& ontology, ConceptSystem system, std::string_view code);

}  // namespace rtqa::ontology
