#include "rtqa/service/session_store.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "rtqa/facts/plan_io.hpp"

namespace rtqa::service {

namespace fs = std::filesystem;
using evaluation::Session;

evaluation::SessionInputs make_inputs(const json& facts_doc, const json& plan_doc, const ontology::Ontology& ontology,
                                      const std::optional<std::string>& class_filter) {
  evaluation::SessionInputs inputs;
  inputs.facts = facts::working_memory_from_json(facts_doc);
  if (!plan_doc.is_null()) inputs.plan = facts::ingest_plan(plan_doc, ontology);
  if (class_filter) {
    try {
      inputs.class_filter = evaluation::parse_class_filter(*class_filter);
    } catch (const Error& e) {
      throw facts::SchemaError("/class_filter", e.what());
    }
  }
  return inputs;
}

SessionStore::SessionStore(std::shared_ptr<facts::MlmRepository> repository, std::optional<fs::path> snapshot_dir)
    : repository_(std::move(repository)), snapshot_dir_(std::move(snapshot_dir)) {
  std::random_device rd;
  nonce_seed_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::shared_ptr<const rulelang::CompiledRulebase> SessionStore::rulebase(const std::string& id,
                                                                         const std::string& version) {
  std::optional<facts::RepositoryEntry> hit;
  for (const auto& e : repository_->list()) {
    if (e.id == id && (version.empty() || e.version == version)) hit = e;
  }
  if (!hit) throw facts::NotFound("rulepack '" + id + "' not found");
  std::lock_guard lock(cache_mu_);
  auto key = std::make_pair(hit->id, hit->version);
  auto it = cache_.find(key);
  if (it != cache_.end() && it->second->content_hash == hit->content_hash) return it->second;
  auto compiled = repository_->load(hit->id, hit->version);
  cache_[key] = compiled;
  return compiled;
}

std::string SessionStore::next_id(const json& body) {
  std::uint64_t h = fnv1a64(body.dump());
  const std::uint64_t n = counter_.fetch_add(1) + 1;
  h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&n), sizeof n), h ^ nonce_seed_);
  return hex64(h);
}

std::unique_ptr<Session> SessionStore::build(const std::string& id, const json& body) {
  if (!body.is_object()) throw facts::SchemaError("", "request body must be a JSON object");
  std::string pack_id, pack_version;
  if (!body.contains("rulepack")) throw facts::SchemaError("/rulepack", "required member is missing");
  const json& rp = body.at("rulepack");
  if (rp.is_string()) {
    pack_id = rp.get<std::string>();
  } else if (rp.is_object() && rp.contains("id") && rp.at("id").is_string()) {
    pack_id = rp.at("id").get<std::string>();
    if (rp.contains("version")) {
      if (!rp.at("version").is_string()) throw facts::SchemaError("/rulepack/version", "expected a string");
      pack_version = rp.at("version").get<std::string>();
    }
  } else {
    throw facts::SchemaError("/rulepack", "expected a rulepack id or {id, version}");
  }
  if (!body.contains("facts")) throw facts::SchemaError("/facts", "required member is missing");
  std::optional<std::string> filter;
  if (body.contains("class_filter") && !body.at("class_filter").is_null()) {
    if (!body.at("class_filter").is_string()) throw facts::SchemaError("/class_filter", "expected a string");
    filter = body.at("class_filter").get<std::string>();
  }
  auto base = rulebase(pack_id, pack_version);
  evaluation::SessionInputs inputs;
  try {
    inputs.facts = facts::working_memory_from_json(body.at("facts"));
  } catch (const facts::SchemaError& e) {
    throw e.rebased("/facts");
  }
  if (body.contains("plan") && !body.at("plan").is_null()) {
    try {
      inputs.plan = facts::ingest_plan(body.at("plan"), *base->ontology);
    } catch (const facts::SchemaError& e) {
      throw e.rebased("/plan");
    }
  }
  if (filter) {
    try {
      inputs.class_filter = evaluation::parse_class_filter(*filter);
    } catch (const Error& e) {
      throw facts::SchemaError("/class_filter", e.what());
    }
  }
  auto session = std::make_unique<Session>(id, std::move(base), std::move(inputs));
  session->run();
  return session;
}

json SessionStore::create(const json& body) {
  const std::string id = next_id(body);
  auto e = std::make_shared<Entry>();
  e->session = build(id, body);
  e->request = body;
  json state = e->session->state_json();
  snapshot(id, *e);
  std::unique_lock lock(mu_);
  sessions_.emplace(id, std::move(e));
  return state;
}

std::shared_ptr<SessionStore::Entry> SessionStore::entry(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSession("session '" + id + "' not found");
  return it->second;
}

json SessionStore::state(const std::string& id) const {
  auto e = entry(id);
  std::lock_guard lock(e->mu);
  return e->session->state_json();
}

json SessionStore::answer(const std::string& id, const json& body) {
  auto e = entry(id);
  json list = json::array();
  list.push_back(body);
  const auto answers = evaluation::answers_from_json(list);
  std::lock_guard lock(e->mu);
  const auto& a = answers.front();
  const auto& verdict = e->session->answer_manual(a.criterion, a.answer, a.answered_by);
  json out{{"verdict", evaluation::verdict_to_json(verdict)},
           {"status", evaluation::to_string(e->session->status())},
           {"pending", e->session->pending()}};
  e->answers.push_back(body);
  snapshot(id, *e);
  return out;
}

std::string SessionStore::finalize(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mu);
  std::string out = e->session->finalize().dump();
  snapshot(id, *e);
  return out;
}

json SessionStore::trace(const std::string& id) const {
  auto e = entry(id);
  std::lock_guard lock(e->mu);
  return engine::trace_to_json(e->session->classification().trace);
}

json SessionStore::rulepacks() const {
  json list = json::array();
  for (const auto& r : repository_->list()) {
    list.push_back({{"id", r.id}, {"version", r.version}, {"content_hash", r.content_hash}});
  }
  return {{"rulepacks", list}};
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

void SessionStore::snapshot(const std::string& id, const Entry& e) const {
  if (!snapshot_dir_) return;
  fs::create_directories(*snapshot_dir_);
  const json doc{{"session_id", id},
                 {"request", e.request},
                 {"answers", e.answers},
                 {"finalized", e.session->status() == evaluation::SessionStatus::Finalized}};
  const fs::path tmp = *snapshot_dir_ / (id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write snapshot " + tmp.string());
    out << doc.dump() << '\n';
  }
  fs::rename(tmp, *snapshot_dir_ / (id + ".json"));
}

std::size_t SessionStore::restore_snapshots() {
  if (!snapshot_dir_ || !fs::exists(*snapshot_dir_)) return 0;
  std::size_t restored = 0;
  std::vector<fs::path> files;
  for (const auto& f : fs::directory_iterator(*snapshot_dir_)) {
    if (f.path().extension() == ".json") files.push_back(f.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const json doc = facts::read_json_file(path);
    const std::string id = doc.at("session_id").get<std::string>();
    auto e = std::make_shared<Entry>();
    e->request = doc.at("request");
    e->session = build(id, e->request);
    for (const auto& a : evaluation::answers_from_json(doc.at("answers"))) {
      e->session->answer_manual(a.criterion, a.answer, a.answered_by);
    }
    e->answers = doc.at("answers");
    if (doc.at("finalized").get<bool>()) e->session->finalize();
    std::unique_lock lock(mu_);
    sessions_[id] = std::move(e);
    ++restored;
  }
  return restored;
}

}  // namespace rtqa::service
