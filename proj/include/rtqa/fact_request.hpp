#pragma once

#include <optional>
#include <string>
#include <variant>

#include "rtqa/value.hpp"

namespace rtqa {

// Derived plan quantities the data manipulator can compute.
enum class MetricOp {
  V,             // volume receiving >= level
  D,             // dose covering a volume percentage
  Mean,
  MaxPoint,
  CI,            // conformity index
  HI,            // homogeneity index
  ColdSpots,
  HotSpots,
  VolumeCc,
  Delineated,
  ContourColor,
};

enum class VolumeOutput { Percent, Cc };

std::string_view to_string(MetricOp op);
std::optional<MetricOp> parse_metric_op(std::string_view text);

struct RawFactRequest {
  std::string key;

  friend bool operator==(const RawFactRequest&, const RawFactRequest&) = default;
};

// Parameters by op:
//   V            structure, level (% of prescription or Gy), output
//   D            structure, level (% of volume)
//   Mean, MaxPoint, VolumeCc, Delineated, ContourColor   structure
//   CI, HI, ColdSpots, HotSpots                          none
struct MetricRequest {
  MetricOp op = MetricOp::CI;
  std::string structure;
  std::optional<Quantity> level;
  std::optional<VolumeOutput> output;

  friend bool operator==(const MetricRequest&, const MetricRequest&) = default;
};

using FactRequest = std::variant<RawFactRequest, MetricRequest>;

bool metric_takes_structure(MetricOp op);

// Throws Error when parameters do not match the op's arity or units.
void check_metric_arity(const MetricRequest& request);

// Rule-file syntax: `fact "lab.psa"` or `metric V("Bladder", 80%, percent)`.
std::string format_request(const FactRequest& request);

// Keys are dotted lowercase paths: [a-z0-9_]+(\.[a-z0-9_]+)*
bool is_valid_fact_key(std::string_view key);

}  // namespace rtqa
