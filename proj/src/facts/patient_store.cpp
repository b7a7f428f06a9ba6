#include "rtqa/facts/patient_store.hpp"

#include <algorithm>
#include <fstream>

namespace rtqa::facts {

namespace fs = std::filesystem;

bool is_safe_id(std::string_view id) {
  if (id.empty() || id.front() == '.' || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

PatientRecord patient_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "patient record must be an object");
  PatientRecord r;
  if (!doc.contains("id") || !doc.at("id").is_string()) throw SchemaError("/id", "required string");
  r.id = doc.at("id").get<std::string>();
  if (!is_safe_id(r.id)) throw SchemaError("/id", "id must match [A-Za-z0-9._-]+");
  if (!doc.contains("diagnosis_confirmed") || !doc.at("diagnosis_confirmed").is_boolean()) {
    throw SchemaError("/diagnosis_confirmed", "required boolean");
  }
  r.diagnosis_confirmed = doc.at("diagnosis_confirmed").get<bool>();
  if (doc.contains("facts")) {
    r.facts = doc.at("facts");
    (void)facts_from_json(r.facts);
  }
  if (doc.contains("plans")) {
    const json& plans = doc.at("plans");
    if (!plans.is_array()) throw SchemaError("/plans", "expected an array");
    for (std::size_t i = 0; i < plans.size(); ++i) {
      if (!plans[i].is_string()) throw SchemaError("/plans/" + std::to_string(i), "expected a string");
      r.plans.push_back(plans[i].get<std::string>());
    }
  }
  if (doc.contains("recurrences")) r.recurrences = doc.at("recurrences");
  return r;
}

json patient_to_json(const PatientRecord& r) {
  return {{"id", r.id},
          {"diagnosis_confirmed", r.diagnosis_confirmed},
          {"facts", r.facts},
          {"plans", r.plans},
          {"recurrences", r.recurrences}};
}

PatientStore::PatientStore(fs::path dir) : dir_(std::move(dir)) {}

void PatientStore::store(const PatientRecord& record) {
  if (!is_safe_id(record.id)) throw SchemaError("/id", "id must match [A-Za-z0-9._-]+");
  if (!record.diagnosis_confirmed) {
    throw DiagnosisNotConfirmed("patient " + record.id + ": primary tumour diagnosis not confirmed");
  }
  (void)facts_from_json(record.facts);
  std::lock_guard lock(mu_);
  fs::create_directories(dir_);
  const fs::path tmp = dir_ / (record.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << patient_to_json(record).dump(2) << '\n';
  }
  fs::rename(tmp, dir_ / (record.id + ".json"));
}

PatientRecord PatientStore::load(const std::string& id) const {
  if (!is_safe_id(id)) throw NotFound("patient '" + id + "' not found");
  std::lock_guard lock(mu_);
  const fs::path path = dir_ / (id + ".json");
  if (!fs::exists(path)) throw NotFound("patient '" + id + "' not found");
  return patient_from_json(read_json_file(path));
}

std::vector<std::string> PatientStore::list() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> ids;
  if (!fs::exists(dir_)) return ids;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    if (entry.path().extension() == ".json") ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace rtqa::facts
