#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "rtqa/facts/facts_io.hpp"

namespace rtqa::facts {

class NotFound : public Error {
 public:
  using Error::Error;
};

class DiagnosisNotConfirmed : public Error {
 public:
  using Error::Error;
};

// patients/<id>.json
struct PatientRecord {
  std::string id;
  bool diagnosis_confirmed = false;
  json facts = json::object();  // facts.json form
  std::vector<std::string> plans;
  // Reserved recurrence fields (local, opposite-side, metastatic sites);
  // stored verbatim, not interpreted.
  json recurrences = json::object();

  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

PatientRecord patient_from_json(const json& doc);
json patient_to_json(const PatientRecord& record);

// Ids are used as file names: [A-Za-z0-9._-]+, not starting with '.'.
bool is_safe_id(std::string_view id);

class PatientStore {
 public:
  explicit PatientStore(std::filesystem::path dir);

  // Throws DiagnosisNotConfirmed unless the record's diagnosis is
  // confirmed; SchemaError when its facts do not load.
  void store(const PatientRecord& record);
  PatientRecord load(const std::string& id) const;  // throws NotFound
  std::vector<std::string> list() const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

}  // namespace rtqa::facts
