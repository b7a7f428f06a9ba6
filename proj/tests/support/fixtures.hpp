#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "rtqa/dosimetry/plan.hpp"
#include "rtqa/engine/engine.hpp"
#include "rtqa/rulelang/rulepack.hpp"
#include "rtqa/value.hpp"

namespace rtqa::test {

namespace fs = std::filesystem;

fs::path source_dir();
fs::path fixture_path(const std::string& relative);
fs::path sample_pack_dir();

std::string read_text(const fs::path& path);
json load_json(const fs::path& path);

// Compiled once per process.
std::shared_ptr<const rulelang::CompiledRulebase> sample_rulebase();
const ontology::Ontology& sample_ontology();

engine::WorkingMemory fixture_facts(const std::string& name);    // facts/facts_<name>.json
dosimetry::PlanModel fixture_plan(const std::string& name);      // plans/plan_<name>.json

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the rtqa CLI in-process.
CommandResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text = {});

// Runs the built rtqa binary as a child process.
CommandResult run_binary(const std::vector<std::string>& args);

}  // namespace rtqa::test
