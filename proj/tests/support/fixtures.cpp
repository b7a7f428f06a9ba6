#include "support/fixtures.hpp"

#include <sys/wait.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "rtqa/facts/facts_io.hpp"
#include "rtqa/facts/plan_io.hpp"
#include "rtqa/service/cli.hpp"

namespace rtqa::test {

fs::path source_dir() { return fs::path(RTQA_SOURCE_DIR); }

fs::path fixture_path(const std::string& relative) { return source_dir() / "tests" / "fixtures" / relative; }

fs::path sample_pack_dir() { return source_dir() / "rulepacks" / "prostate_3dcrt"; }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const fs::path& path) { return json::parse(read_text(path)); }

std::shared_ptr<const rulelang::CompiledRulebase> sample_rulebase() {
  static const auto base = rulelang::compile_rulebase(rulelang::load_rulepack_dir(sample_pack_dir()));
  return base;
}

const ontology::Ontology& sample_ontology() { return *sample_rulebase()->ontology; }

engine::WorkingMemory fixture_facts(const std::string& name) {
  return facts::load_facts(fixture_path("facts/facts_" + name + ".json"));
}

dosimetry::PlanModel fixture_plan(const std::string& name) {
  return facts::ingest_plan_file(fixture_path("plans/plan_" + name + ".json"), sample_ontology());
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("rtqa-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

CommandResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text) {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  CommandResult r;
  r.exit_code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

}  // namespace

CommandResult run_binary(const std::vector<std::string>& args) {
  TempDir tmp;
  std::string cmd = shell_quote(RTQA_BINARY);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>" + shell_quote((tmp.path() / "stderr").string());
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw Error("cannot run " + cmd);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = read_text(tmp.path() / "stderr");
  return r;
}

}  // namespace rtqa::test
