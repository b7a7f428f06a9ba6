#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rtqa/dosimetry/plan.hpp"
#include "rtqa/engine/engine.hpp"
#include "rtqa/fact_request.hpp"

namespace rtqa::facts {

// A fact that cannot be answered. `missing` names the absent fact keys or
// structures.
struct Unavailable {
  std::string reason;
  std::vector<std::string> missing;

  friend bool operator==(const Unavailable&, const Unavailable&) = default;
};

using FactAnswer = std::variant<Value, Unavailable>;

// Plan-level raw facts under the reserved "plan." prefix:
//   plan.technique                "3DCRT" | "IMRT" | "VMAT"
//   plan.total_dose               Gy
//   plan.fractions                count
//   plan.dose_per_fraction        Gy
//   plan.prescription_consistent  bool
//   plan.nonconforming_names      count of structures the ontology does not know
std::optional<Value> plan_fact(std::string_view key, const dosimetry::PlanModel& plan);

const std::vector<std::string>& plan_fact_keys();

// Pure: raw facts come from the working memory (plan.* from the plan),
// metrics are computed from the plan. `plan` may be null.
FactAnswer provide_fact(const FactRequest& request, const engine::WorkingMemory& wm,
                        const dosimetry::PlanModel* plan);

}  // namespace rtqa::facts
