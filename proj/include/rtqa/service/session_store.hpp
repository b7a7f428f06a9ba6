#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "rtqa/evaluation/evaluation.hpp"
#include "rtqa/facts/repository.hpp"

namespace rtqa::service {

// Builds evaluation inputs from the facts.json and plan.json documents.
// The plan may be null. Throws facts::SchemaError / GridShapeMismatch.
evaluation::SessionInputs make_inputs(const json& facts_doc, const json& plan_doc,
                                      const ontology::Ontology& ontology,
                                      const std::optional<std::string>& class_filter);

class UnknownSession : public Error {
 public:
  using Error::Error;
};

// Sessions keyed by id. Different sessions proceed in parallel; calls on
// one session are serialized.
class SessionStore {
 public:
  // `snapshot_dir`, when set, receives one JSON file per session holding
  // its inputs and answers so sessions survive a restart.
  SessionStore(std::shared_ptr<facts::MlmRepository> repository,
               std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

  // Body: {facts, plan, rulepack: id | {id, version}, class_filter?}.
  // Returns the session state. Throws facts::NotFound, facts::SchemaError,
  // evaluation::NoApplicableClass, evaluation::AmbiguousClass.
  json create(const json& body);

  json state(const std::string& id) const;
  // Body: {criterion, answer, answered_by}.
  json answer(const std::string& id, const json& body);
  // Report document, identical to the CLI's report.json.
  std::string finalize(const std::string& id);
  json trace(const std::string& id) const;
  json rulepacks() const;

  std::size_t size() const;

  // Rebuilds sessions from snapshot files; returns how many were restored.
  std::size_t restore_snapshots();

 private:
  struct Entry {
    mutable std::mutex mu;
    std::unique_ptr<evaluation::Session> session;
    json request;
    json answers = json::array();
  };

  std::shared_ptr<const rulelang::CompiledRulebase> rulebase(const std::string& id, const std::string& version);
  std::shared_ptr<Entry> entry(const std::string& id) const;
  std::unique_ptr<evaluation::Session> build(const std::string& id, const json& body);
  void snapshot(const std::string& id, const Entry& e) const;
  std::string next_id(const json& body);

  std::shared_ptr<facts::MlmRepository> repository_;
  std::optional<std::filesystem::path> snapshot_dir_;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;

  std::mutex cache_mu_;
  std::map<std::pair<std::string, std::string>, std::shared_ptr<const rulelang::CompiledRulebase>> cache_;

  std::uint64_t nonce_seed_;
  std::atomic<std::uint64_t> counter_{0};
};

}  // namespace rtqa::service
