#include "rtqa/rulelang/rulepack.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rtqa/rulelang/decision_table.hpp"
#include "rtqa/rulelang/parser.hpp"
#include "rtqa/rulelang/validator.hpp"

namespace rtqa::rulelang {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

RulepackManifest parse_manifest(const std::string& text) {
  RulepackManifest m;
  try {
    const json j = json::parse(text);
    m.id = j.at("id").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.files = j.at("files").get<std::vector<std::string>>();
    if (j.contains("ontology")) m.ontology = j.at("ontology").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(std::string("rulepack.json: ") + e.what());
  }
  if (m.id.empty()) throw Error("rulepack.json: empty id");
  for (const auto& f : m.files) {
    if (f.find("..") != std::string::npos || (!f.empty() && f.front() == '/')) {
      throw Error("rulepack.json: file '" + f + "' must be a relative path inside the pack");
    }
  }
  return m;
}

}  // namespace

const RulepackFile* Rulepack::find_file(std::string_view name) const {
  for (const auto& f : files) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ValidationFailed::ValidationFailed(std::vector<RuleIssue> list)
    : Error([&] {
        std::string msg = "rulepack has validation errors:";
        for (const auto& i : list) {
          if (i.severity == Severity::Error) msg += "\n  " + format_issue(i);
        }
        return msg;
      }()),
      issues(std::move(list)) {}

Rulepack rulepack_from_sources(std::string manifest_text, std::vector<RulepackFile> files) {
  Rulepack pack;
  pack.manifest = parse_manifest(manifest_text);
  pack.manifest_text = std::move(manifest_text);
  pack.files = std::move(files);

  std::uint64_t h = fnv1a64(pack.manifest_text);
  for (const auto& f : pack.files) {
    h = fnv1a64(f.name, h);
    h = fnv1a64(std::string_view("\0", 1), h);
    h = fnv1a64(f.content, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  }
  pack.content_hash = hex64(h);

  for (const auto& name : pack.manifest.files) {
    const RulepackFile* file = pack.find_file(name);
    if (!file) throw Error("rulepack " + pack.manifest.id + ": missing file " + name);
    try {
      if (ends_with(name, ".mlm")) {
        auto mlms = parse_mlms(file->content, name);
        pack.mlms.insert(pack.mlms.end(), mlms.begin(), mlms.end());
      } else if (ends_with(name, ".dtab")) {
        auto rules = table_to_rules(parse_decision_table(file->content, name));
        pack.mlms.insert(pack.mlms.end(), rules.begin(), rules.end());
      } else {
        throw Error("rulepack " + pack.manifest.id + ": unsupported file type " + name);
      }
    } catch (const RuleError& e) {
      pack.parse_issues.push_back(e.issue());
    }
  }
  return pack;
}

Rulepack load_rulepack_dir(const fs::path& dir) {
  const fs::path manifest_path = dir / "rulepack.json";
  std::string manifest_text = read_file(manifest_path);
  const RulepackManifest manifest = parse_manifest(manifest_text);
  std::vector<RulepackFile> files;
  for (const auto& name : manifest.files) files.push_back({name, read_file(dir / name)});
  if (manifest.ontology) files.push_back({*manifest.ontology, read_file(dir / *manifest.ontology)});
  return rulepack_from_sources(std::move(manifest_text), std::move(files));
}

ontology::Ontology rulepack_ontology(const Rulepack& pack) {
  if (!pack.manifest.ontology) return {};
  const RulepackFile* file = pack.find_file(*pack.manifest.ontology);
  if (!file) throw Error("rulepack " + pack.manifest.id + ": missing ontology file " + *pack.manifest.ontology);
  try {
    return ontology::Ontology::from_json(json::parse(file->content));
  } catch (const json::parse_error& e) {
    throw Error(*pack.manifest.ontology + ": " + e.what());
  }
}

std::vector<RuleIssue> lint_rulepack(const Rulepack& pack, const ontology::Ontology& ontology) {
  std::vector<RuleIssue> issues = pack.parse_issues;
  auto validation = validate_rulebase(pack.mlms, ontology);
  issues.insert(issues.end(), validation.begin(), validation.end());
  for (const auto& name : pack.manifest.files) {
    if (!ends_with(name, ".dtab")) continue;
    try {
      const auto table = parse_decision_table(pack.find_file(name)->content, name);
      (void)check_completeness(table);
    } catch (const OverlapError& e) {
      issues.push_back(RuleIssue{Severity::Error, IssueKind::ConflictingRule, {}, {}, e.what(), name});
    } catch (const RuleError&) {
      // already in parse_issues
    }
  }
  return issues;
}

std::vector<CompiledRule> CompiledRulebase::classification_rules() const {
  std::vector<CompiledRule> out;
  for (const auto& r : rules) {
    if (r.kind == RuleKind::Classification) out.push_back(r);
  }
  return out;
}

std::vector<const CompiledRule*> CompiledRulebase::criteria() const {
  std::vector<const CompiledRule*> out;
  for (const auto& r : rules) {
    if (r.kind == RuleKind::Criterion) out.push_back(&r);
  }
  return out;
}

const CompiledRule* CompiledRulebase::find(std::string_view name) const {
  auto it = std::lower_bound(rules.begin(), rules.end(), name,
                             [](const CompiledRule& r, std::string_view n) { return r.name < n; });
  if (it == rules.end() || it->name != name) return nullptr;
  return &*it;
}

std::shared_ptr<const CompiledRulebase> compile_rulebase(const Rulepack& pack) {
  return compile_rulebase(pack, rulepack_ontology(pack));
}

std::shared_ptr<const CompiledRulebase> compile_rulebase(const Rulepack& pack, ontology::Ontology onto) {
  auto ontology = std::make_shared<const ontology::Ontology>(std::move(onto));
  auto issues = lint_rulepack(pack, *ontology);
  if (has_errors(issues)) throw ValidationFailed(std::move(issues));
  auto base = std::make_shared<CompiledRulebase>();
  base->id = pack.manifest.id;
  base->version = pack.manifest.version;
  base->content_hash = pack.content_hash;
  base->ontology = std::move(ontology);
  for (const auto& mlm : pack.mlms) base->rules.push_back(compile_rule(mlm));
  std::sort(base->rules.begin(), base->rules.end(),
            [](const CompiledRule& a, const CompiledRule& b) { return a.name < b.name; });
  return base;
}

}  // namespace rtqa::rulelang
