#include "rtqa/fact_request.hpp"

#include <array>

namespace rtqa {

namespace {

constexpr std::array<std::pair<MetricOp, std::string_view>, 11> kMetricNames{{
    {MetricOp::V, "V"},
    {MetricOp::D, "D"},
    {MetricOp::Mean, "mean"},
    {MetricOp::MaxPoint, "max_point"},
    {MetricOp::CI, "ci"},
    {MetricOp::HI, "hi"},
    {MetricOp::ColdSpots, "cold_spots"},
    {MetricOp::HotSpots, "hot_spots"},
    {MetricOp::VolumeCc, "volume_cc"},
    {MetricOp::Delineated, "delineated"},
    {MetricOp::ContourColor, "contour_color"},
}};

}  // namespace

std::string_view to_string(MetricOp op) {
  for (const auto& [candidate, name] : kMetricNames) {
    if (candidate == op) return name;
  }
  return "?";
}

std::optional<MetricOp> parse_metric_op(std::string_view text) {
  for (const auto& [op, name] : kMetricNames) {
    if (name == text) return op;
  }
  return std::nullopt;
}

bool metric_takes_structure(MetricOp op) {
  switch (op) {
    case MetricOp::CI:
    case MetricOp::HI:
    case MetricOp::ColdSpots:
    case MetricOp::HotSpots:
      return false;
    default:
      return true;
  }
}

void check_metric_arity(const MetricRequest& request) {
  const std::string name(to_string(request.op));
  if (metric_takes_structure(request.op) == request.structure.empty()) {
    throw Error("metric " + name + (request.structure.empty() ? " requires a structure" : " takes no structure"));
  }
  switch (request.op) {
    case MetricOp::V:
      if (!request.level || !request.output) throw Error("metric V requires a dose level and an output unit");
      if (request.level->unit != Unit::Percent && request.level->unit != Unit::Gy) {
        throw Error("metric V level must be in % of prescription or Gy");
      }
      return;
    case MetricOp::D:
      if (!request.level || request.output) throw Error("metric D takes exactly a volume percentage");
      if (request.level->unit != Unit::Percent) throw Error("metric D level must be a volume percentage");
      if (!(request.level->value > 0.0 && request.level->value <= 100.0)) {
        throw Error("metric D volume percentage must be in (0, 100]");
      }
      return;
    default:
      if (request.level || request.output) throw Error("metric " + name + " takes no level or output");
      return;
  }
}

std::string format_request(const FactRequest& request) {
  if (const auto* raw = std::get_if<RawFactRequest>(&request)) {
    return "fact " + format_value(Value{raw->key});
  }
  const auto& metric = std::get<MetricRequest>(request);
  std::string out = "metric " + std::string(to_string(metric.op));
  if (!metric_takes_structure(metric.op)) return out;
  out += "(" + format_value(Value{metric.structure});
  if (metric.level) out += ", " + format_value(Value{*metric.level});
  if (metric.output) out += metric.output == VolumeOutput::Percent ? ", percent" : ", cc";
  out += ")";
  return out;
}

bool is_valid_fact_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  char prev = '\0';
  for (char c : key) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    if (!ok) return false;
    if (c == '.' && prev == '.') return false;
    prev = c;
  }
  return true;
}

}  // namespace rtqa
