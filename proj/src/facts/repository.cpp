#include "rtqa/facts/repository.hpp"

#include <fstream>

namespace rtqa::facts {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

ValidationGate::ValidationGate(std::vector<rulelang::RuleIssue> list)
    : Error([&] {
        std::string msg = "rulepack rejected by validation:";
        for (const auto& i : list) {
          if (i.severity == rulelang::Severity::Error) msg += "\n  " + rulelang::format_issue(i);
        }
        return msg;
      }()),
      issues(std::move(list)) {}

MlmRepository::MlmRepository(fs::path root) : root_(std::move(root)) {}

std::vector<RepositoryEntry> MlmRepository::read_index() const {
  std::vector<RepositoryEntry> out;
  const fs::path path = root_ / "index.json";
  if (!fs::exists(path)) return out;
  const json doc = read_json_file(path);
  for (const auto& e : doc.at("rulepacks")) {
    out.push_back({e.at("id").get<std::string>(), e.at("version").get<std::string>(),
                   e.at("content_hash").get<std::string>()});
  }
  return out;
}

void MlmRepository::write_index(const std::vector<RepositoryEntry>& entries) const {
  json list = json::array();
  for (const auto& e : entries) list.push_back({{"id", e.id}, {"version", e.version}, {"content_hash", e.content_hash}});
  const fs::path tmp = root_ / "index.json.tmp";
  write_file(tmp, json{{"rulepacks", list}}.dump(2) + "\n");
  fs::rename(tmp, root_ / "index.json");
}

std::optional<RepositoryEntry> MlmRepository::find(const std::string& id, const std::string& version) const {
  std::optional<RepositoryEntry> hit;
  for (const auto& e : read_index()) {
    if (e.id == id && (version.empty() || e.version == version)) hit = e;
  }
  return hit;
}

RepositoryEntry MlmRepository::store(const rulelang::Rulepack& pack) {
  const auto& m = pack.manifest;
  if (!is_safe_id(m.id)) throw Error("rulepack id '" + m.id + "' is not usable as a directory name");
  if (!is_safe_id(m.version)) throw Error("rulepack version '" + m.version + "' is not usable as a directory name");
  auto issues = rulelang::lint_rulepack(pack, rulelang::rulepack_ontology(pack));
  if (rulelang::has_errors(issues)) throw ValidationGate(std::move(issues));

  std::lock_guard lock(mu_);
  auto entries = read_index();
  for (const auto& e : entries) {
    if (e.id != m.id || e.version != m.version) continue;
    if (e.content_hash == pack.content_hash) return e;
    throw Error("rulepack " + m.id + " version " + m.version + " is already stored with different content");
  }
  const fs::path dir = root_ / m.id / m.version;
  const fs::path staging = root_ / m.id / (m.version + ".staging");
  fs::remove_all(staging);
  write_file(staging / "rulepack.json", pack.manifest_text);
  for (const auto& f : pack.files) write_file(staging / f.name, f.content);
  fs::remove_all(dir);
  fs::rename(staging, dir);
  RepositoryEntry entry{m.id, m.version, pack.content_hash};
  entries.push_back(entry);
  write_index(entries);
  return entry;
}

rulelang::Rulepack MlmRepository::load_pack(const std::string& id, const std::string& version) const {
  std::lock_guard lock(mu_);
  auto entry = find(id, version);
  if (!entry) {
    throw NotFound("rulepack '" + id + "'" + (version.empty() ? std::string() : " version " + version) +
                   " not found");
  }
  auto pack = rulelang::load_rulepack_dir(root_ / entry->id / entry->version);
  if (pack.content_hash != entry->content_hash) {
    throw Error("rulepack " + id + " version " + entry->version + " does not match its recorded content hash");
  }
  return pack;
}

std::shared_ptr<const rulelang::CompiledRulebase> MlmRepository::load(const std::string& id,
                                                                      const std::string& version) const {
  return rulelang::compile_rulebase(load_pack(id, version));
}

std::vector<RepositoryEntry> MlmRepository::list() const {
  std::lock_guard lock(mu_);
  return read_index();
}

}  // namespace rtqa::facts
