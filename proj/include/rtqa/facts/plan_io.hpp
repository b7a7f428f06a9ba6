#pragma once

#include <filesystem>

#include "rtqa/dosimetry/plan.hpp"
#include "rtqa/facts/facts_io.hpp"
#include "rtqa/ontology/ontology.hpp"

namespace rtqa::facts {

class GridShapeMismatch : public Error {
 public:
  GridShapeMismatch(std::size_t expected, std::size_t actual);

  std::size_t expected;
  std::size_t actual;
};

// Validates plan.json and builds the model. Structure names are mapped to
// canonical names through the ontology; unknown names are kept raw and
// flagged as nonconforming. Throws SchemaError or GridShapeMismatch.
dosimetry::PlanModel ingest_plan(const json& doc, const ontology::Ontology& ontology);
dosimetry::PlanModel ingest_plan_file(const std::filesystem::path& path, const ontology::Ontology& ontology);

json plan_to_json(const dosimetry::PlanModel& plan);

}  // namespace rtqa::facts
