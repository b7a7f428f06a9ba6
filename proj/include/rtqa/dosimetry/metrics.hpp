#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rtqa/dosimetry/plan.hpp"
#include "rtqa/fact_request.hpp"

namespace rtqa::dosimetry {

// DVH bins sit at k / kDvhBinsPerGy Gy (0.1 Gy width).
inline constexpr double kDvhBinsPerGy = 10.0;
inline constexpr double kColdSpotFraction = 0.95;
inline constexpr double kHotSpotFraction = 1.07;

struct CumulativeDvh {
  std::string structure;
  // (dose Gy, fraction of volume receiving >= dose); the last bin is the
  // first one above the structure maximum.
  std::vector<std::pair<double, double>> bins;
};

CumulativeDvh dvh(const PlanModel& plan, std::string_view structure);

// Dose threshold for a V level: percent of the prescription or Gy.
double v_threshold(const PlanModel& plan, const Quantity& level);

// Share (percent) or volume (cc) of the structure receiving >= level.
double v_metric(const PlanModel& plan, std::string_view structure, const Quantity& level, VolumeOutput output);

// Largest voxel dose d with at least volume_percent of the structure at
// >= d. No interpolation.
double d_metric(const PlanModel& plan, std::string_view structure, double volume_percent);

double mean_dose(const PlanModel& plan, std::string_view structure);
double max_point_dose(const PlanModel& plan, std::string_view structure);
double volume_cc(const PlanModel& plan, std::string_view structure);

// Voxels at >= 100% of the prescription anywhere in the grid, over the
// PTV volume.
double conformity_index(const PlanModel& plan);

// D95 / D5 over the PTV.
double homogeneity_index(const PlanModel& plan);

// 6-connected components of PTV voxels <= 95% Rx.
int count_cold_spots(const PlanModel& plan);

// 6-connected components of grid voxels > 107% Rx.
int count_hot_spots(const PlanModel& plan);

// Number of 6-connected components among flagged voxels of a grid with
// the given dims.
int count_components(const std::array<int, 3>& dims, const std::vector<char>& mask);

}  // namespace rtqa::dosimetry
