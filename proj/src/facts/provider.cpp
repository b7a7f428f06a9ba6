#include "rtqa/facts/provider.hpp"

#include "rtqa/dosimetry/metrics.hpp"
#include "rtqa/facts/facts_io.hpp"

namespace rtqa::facts {

namespace dm = dosimetry;

const std::vector<std::string>& plan_fact_keys() {
  static const std::vector<std::string> keys = {"plan.technique",         "plan.total_dose",
                                                "plan.fractions",         "plan.dose_per_fraction",
                                                "plan.prescription_consistent", "plan.nonconforming_names"};
  return keys;
}

std::optional<Value> plan_fact(std::string_view key, const dm::PlanModel& plan) {
  const auto& p = plan.prescription;
  if (key == "plan.technique") return std::string(dm::to_string(p.technique));
  if (key == "plan.total_dose") return Quantity{p.total_dose_gy, Unit::Gy};
  if (key == "plan.fractions") return Quantity{static_cast<double>(p.fractions), Unit::None};
  if (key == "plan.dose_per_fraction") return Quantity{p.dose_per_fraction_gy, Unit::Gy};
  if (key == "plan.prescription_consistent") return p.consistent();
  if (key == "plan.nonconforming_names") {
    double n = 0;
    for (const auto& s : plan.structures) n += s.name_conforms ? 0 : 1;
    return Quantity{n, Unit::None};
  }
  return std::nullopt;
}

namespace {

Value metric_value(const MetricRequest& m, const dm::PlanModel& plan) {
  switch (m.op) {
    case MetricOp::V: {
      const auto out = m.output.value_or(VolumeOutput::Percent);
      const double v = dm::v_metric(plan, m.structure, *m.level, out);
      return Quantity{v, out == VolumeOutput::Cc ? Unit::Cc : Unit::Percent};
    }
    case MetricOp::D: return Quantity{dm::d_metric(plan, m.structure, m.level->value), Unit::Gy};
    case MetricOp::Mean: return Quantity{dm::mean_dose(plan, m.structure), Unit::Gy};
    case MetricOp::MaxPoint: return Quantity{dm::max_point_dose(plan, m.structure), Unit::Gy};
    case MetricOp::CI: return Quantity{dm::conformity_index(plan), Unit::None};
    case MetricOp::HI: return Quantity{dm::homogeneity_index(plan), Unit::None};
    case MetricOp::ColdSpots: return Quantity{static_cast<double>(dm::count_cold_spots(plan)), Unit::None};
    case MetricOp::HotSpots: return Quantity{static_cast<double>(dm::count_hot_spots(plan)), Unit::None};
    case MetricOp::VolumeCc: return Quantity{dm::volume_cc(plan, m.structure), Unit::Cc};
    case MetricOp::Delineated: {
      const dm::Structure* s = plan.find(m.structure);
      return s != nullptr && !s->voxels.empty();
    }
    case MetricOp::ContourColor: {
      const dm::Structure& s = plan.require(m.structure);
      if (!s.color) throw Error("structure '" + s.name + "' has no contour color");
      return *s.color;
    }
  }
  throw Error("unhandled metric");
}

}  // namespace

FactAnswer provide_fact(const FactRequest& request, const engine::WorkingMemory& wm, const dm::PlanModel* plan) {
  if (const auto* raw = std::get_if<RawFactRequest>(&request)) {
    if (raw->key.rfind(kPlanFactPrefix, 0) == 0) {
      if (!plan) return Unavailable{"no plan loaded", {raw->key}};
      if (auto v = plan_fact(raw->key, *plan)) return *v;
      return Unavailable{"unknown plan fact", {raw->key}};
    }
    if (const engine::Fact* f = wm.find(raw->key)) return f->value;
    return Unavailable{"fact not present", {raw->key}};
  }
  const auto& m = std::get<MetricRequest>(request);
  if (!plan) return Unavailable{"no plan loaded", {"plan"}};
  try {
    check_metric_arity(m);
    return metric_value(m, *plan);
  } catch (const dm::UnknownStructure& e) {
    return Unavailable{e.what(), {e.name}};
  } catch (const dm::EmptyStructure& e) {
    return Unavailable{e.what(), {e.name}};
  } catch (const Error& e) {
    const std::string what = m.structure.empty() ? format_request(request) : m.structure;
    return Unavailable{e.what(), {what}};
  }
}

}  // namespace rtqa::facts
