#include "rtqa/ontology/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace rtqa::ontology {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ", ";
    out += item;
  }
  return out;
}

}  // namespace

UnknownConcept::UnknownConcept(ConceptSystem sys, std::string c, std::vector<std::string> sugg)
    : Error("unknown concept " + std::string(to_string(sys)) + " '" + c + "'" +
            (sugg.empty() ? std::string() : " (did you mean: " + join(sugg) + "?)")),
      system(sys),
      code(std::move(c)),
      suggestions(std::move(sugg)) {}

TnmStage parse_tnm(std::string_view text) {
  if (text.empty()) throw MalformedStage("empty TNM stage");
  const std::string s = to_upper(text);
  const auto fail = [&](const std::string& why) {
    return MalformedStage("malformed TNM stage '" + std::string(text) + "': " + why);
  };
  std::size_t pos = 0;
  if (s[pos] != 'T') throw fail("expected T first");
  ++pos;
  if (pos >= s.size() || !is_digit(s[pos])) throw fail("T must be followed by a digit");
  TnmStage stage;
  stage.t.push_back(s[pos++]);
  if (pos < s.size() && s[pos] >= 'A' && s[pos] <= 'Z' && s[pos] != 'N' && s[pos] != 'M') {
    stage.t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[pos]))));
    ++pos;
  }
  if (pos >= s.size() || s[pos] != 'N') throw fail("expected N after T");
  ++pos;
  if (pos >= s.size() || !is_digit(s[pos])) throw fail("N must be a single digit");
  stage.n.push_back(s[pos++]);
  if (pos >= s.size() || s[pos] != 'M') throw fail("expected M after N");
  ++pos;
  if (pos >= s.size() || !is_digit(s[pos])) throw fail("M must be a single digit");
  stage.m.push_back(s[pos++]);
  if (pos != s.size()) throw fail("trailing characters");
  return stage;
}

std::string render_tnm(const TnmStage& stage) { return "T" + stage.t + "N" + stage.n + "M" + stage.m; }

ConceptRef tnm_t_concept(const TnmStage& stage) { return make_concept(ConceptSystem::Tnm, "T" + stage.t); }
ConceptRef tnm_n_concept(const TnmStage& stage) { return make_concept(ConceptSystem::Tnm, "N" + stage.n); }
ConceptRef tnm_m_concept(const TnmStage& stage) { return make_concept(ConceptSystem::Tnm, "M" + stage.m); }

const std::vector<std::string>& color_palette() {
  static const std::vector<std::string> palette{
      "dark blue", "blue", "light blue", "red", "dark red", "green", "dark green", "yellow",
      "orange", "brown", "magenta", "cyan", "purple", "pink", "white"};
  return palette;
}

std::optional<std::string> normalize_color(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c) || c == '_' || c == '-') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  const auto& palette = color_palette();
  if (std::find(palette.begin(), palette.end(), out) == palette.end()) return std::nullopt;
  return out;
}

std::string canonical_structure_name(const std::vector<NomenclatureRule>& table, std::string_view raw) {
  const std::string needle = to_lower(raw);
  for (const auto& rule : table) {
    if (to_lower(rule.canonical_name) == needle) return rule.canonical_name;
    for (const auto& alias : rule.aliases) {
      if (to_lower(alias) == needle) return rule.canonical_name;
    }
  }
  throw UnknownStructureName(std::string(raw));
}

Ontology::Ontology(std::vector<ConceptCode> concepts, std::vector<NomenclatureRule> nomenclature)
    : concepts_(std::move(concepts)), nomenclature_(std::move(nomenclature)) {
  for (std::size_t i = 0; i < concepts_.size(); ++i) {
    auto& c = concepts_[i];
    if (c.code.empty()) throw Error("ontology: empty concept code");
    c.code = to_upper(c.code);
    auto [_, inserted] = index_.emplace(std::make_pair(c.system, c.code), i);
    if (!inserted) throw Error("ontology: duplicate concept " + std::string(to_string(c.system)) + " " + c.code);
  }
  std::set<std::string> names;
  for (auto& rule : nomenclature_) {
    if (rule.canonical_name.empty()) throw Error("ontology: empty canonical structure name");
    if (!names.insert(to_lower(rule.canonical_name)).second) {
      throw Error("ontology: duplicate structure name '" + rule.canonical_name + "'");
    }
    for (const auto& alias : rule.aliases) {
      if (!names.insert(to_lower(alias)).second) throw Error("ontology: duplicate alias '" + alias + "'");
    }
    if (rule.expected_color) {
      auto color = normalize_color(*rule.expected_color);
      if (!color) throw Error("ontology: color '" + *rule.expected_color + "' is not in the palette");
      rule.expected_color = *color;
    }
  }
}

Ontology Ontology::from_json(const json& j) {
  std::vector<ConceptCode> concepts;
  std::vector<NomenclatureRule> nomenclature;
  try {
    for (const auto& c : j.at("concepts")) {
      auto system = parse_concept_system(c.at("system").get<std::string>());
      if (!system) throw Error("ontology: unknown concept system '" + c.at("system").get<std::string>() + "'");
      concepts.push_back({c.at("code").get<std::string>(), *system, c.value("display", std::string())});
    }
    for (const auto& n : j.at("nomenclature")) {
      NomenclatureRule rule;
      rule.canonical_name = n.at("canonical").get<std::string>();
      if (n.contains("color")) rule.expected_color = n.at("color").get<std::string>();
      if (n.contains("aliases")) rule.aliases = n.at("aliases").get<std::vector<std::string>>();
      nomenclature.push_back(std::move(rule));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("ontology: ") + e.what());
  }
  return Ontology(std::move(concepts), std::move(nomenclature));
}

Ontology Ontology::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ontology file " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error("ontology " + path.string() + ": " + e.what());
  }
}

json Ontology::to_json() const {
  json j;
  j["concepts"] = json::array();
  for (const auto& c : concepts_) {
    j["concepts"].push_back({{"system", std::string(to_string(c.system))}, {"code", c.code}, {"display", c.display}});
  }
  j["nomenclature"] = json::array();
  for (const auto& n : nomenclature_) {
    json entry;
    entry["canonical"] = n.canonical_name;
    if (n.expected_color) entry["color"] = *n.expected_color;
    entry["aliases"] = n.aliases;
    j["nomenclature"].push_back(std::move(entry));
  }
  return j;
}

const ConceptCode& Ontology::resolve(ConceptSystem system, std::string_view code) const {
  const std::string normalized = to_upper(code);
  if (auto it = index_.find({system, normalized}); it != index_.end()) return concepts_[it->second];

  // Suggest the codes sharing the longest non-empty prefix.
  std::size_t best = 0;
  std::vector<std::string> suggestions;
  for (const auto& c : concepts_) {
    if (c.system != system) continue;
    std::size_t common = 0;
    while (common < c.code.size() && common < normalized.size() && c.code[common] == normalized[common]) ++common;
    if (common == 0 || common < best) continue;
    if (common > best) {
      best = common;
      suggestions.clear();
    }
    suggestions.push_back(c.code);
  }
  throw UnknownConcept(system, normalized, std::move(suggestions));
}

bool Ontology::contains(ConceptSystem system, std::string_view code) const {
  return index_.count({system, to_upper(code)}) > 0;
}

std::string Ontology::canonical_structure_name(std::string_view raw) const {
  return ontology::canonical_structure_name(nomenclature_, raw);
}

const NomenclatureRule* Ontology::find_nomenclature(std::string_view canonical) const {
  for (const auto& rule : nomenclature_) {
    if (rule.canonical_name == canonical) return &rule;
  }
  return nullptr;
}

const ConceptCode& resolve_concept(const Ontology& ontology, ConceptSystem system, std::string_view code) {
  return ontology.resolve(system, code);
}

}  // namespace rtqa::ontology
