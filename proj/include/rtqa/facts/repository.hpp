#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rtqa/facts/patient_store.hpp"
#include "rtqa/rulelang/rulepack.hpp"

namespace rtqa::facts {

// Storing a rulepack whose validation reports errors.
class ValidationGate : public Error {
 public:
  explicit ValidationGate(std::vector<rulelang::RuleIssue> issues);

  std::vector<rulelang::RuleIssue> issues;
};

struct RepositoryEntry {
  std::string id;
  std::string version;
  std::string content_hash;

  friend bool operator==(const RepositoryEntry&, const RepositoryEntry&) = default;
};

// Directory-backed store of validated rulepacks:
//   <root>/index.json
//   <root>/<id>/<version>/rulepack.json and the pack's files
class MlmRepository {
 public:
  explicit MlmRepository(std::filesystem::path root);

  // Idempotent for identical content; a different pack under the same
  // (id, version) is refused.
  RepositoryEntry store(const rulelang::Rulepack& pack);

  // Latest stored version when `version` is empty. Throws NotFound.
  rulelang::Rulepack load_pack(const std::string& id, const std::string& version = {}) const;
  std::shared_ptr<const rulelang::CompiledRulebase> load(const std::string& id,
                                                         const std::string& version = {}) const;

  std::vector<RepositoryEntry> list() const;

 private:
  std::vector<RepositoryEntry> read_index() const;
  void write_index(const std::vector<RepositoryEntry>& entries) const;
  std::optional<RepositoryEntry> find(const std::string& id, const std::string& version) const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
};

}  // namespace rtqa::facts
