#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtqa/ontology/ontology.hpp"
#include "rtqa/rulelang/ast.hpp"
#include "rtqa/rulelang/compiler.hpp"
#include "rtqa/rulelang/issues.hpp"

namespace rtqa::rulelang {

// rulepack.json: {id, version, files[], ontology?}
struct RulepackManifest {
  std::string id;
  std::string version;
  std::vector<std::string> files;
  std::optional<std::string> ontology;
};

struct RulepackFile {
  std::string name;  // path relative to the rulepack directory
  std::string content;
};

// A rulepack as authored: raw sources plus what parsed out of them.
struct Rulepack {
  RulepackManifest manifest;
  std::string manifest_text;
  std::vector<RulepackFile> files;  // manifest files, then the ontology file if any
  std::string content_hash;

  std::vector<Mlm> mlms;
  std::vector<RuleIssue> parse_issues;

  const RulepackFile* find_file(std::string_view name) const;
};

class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<RuleIssue> issues);

  std::vector<RuleIssue> issues;
};

// Throws Error on I/O or manifest problems. Syntax problems in individual
// files are collected in parse_issues.
Rulepack load_rulepack_dir(const std::filesystem::path& dir);
Rulepack rulepack_from_sources(std::string manifest_text, std::vector<RulepackFile> files);

// Ontology shipped with the pack; empty ontology when none is declared.
ontology::Ontology rulepack_ontology(const Rulepack& pack);

// Parse issues, validator issues and decision-table overlaps.
std::vector<RuleIssue> lint_rulepack(const Rulepack& pack, const ontology::Ontology& ontology);

// Immutable, shareable result of compiling a validated rulepack.
struct CompiledRulebase {
  std::string id;
  std::string version;
  std::string content_hash;
  std::vector<CompiledRule> rules;  // sorted by name
  std::shared_ptr<const ontology::Ontology> ontology;

  std::vector<CompiledRule> classification_rules() const;
  std::vector<const CompiledRule*> criteria() const;
  const CompiledRule* find(std::string_view name) const;
};

// Throws ValidationFailed when lint reports any Error.
std::shared_ptr<const CompiledRulebase> compile_rulebase(const Rulepack& pack);
std::shared_ptr<const CompiledRulebase> compile_rulebase(const Rulepack& pack, ontology::Ontology ontology);

}  // namespace rtqa::rulelang
