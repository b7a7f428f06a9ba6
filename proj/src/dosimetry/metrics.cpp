#include "rtqa/dosimetry/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>

namespace rtqa::dosimetry {

namespace {

const Structure& non_empty(const PlanModel& plan, std::string_view name) {
  const Structure& s = plan.require(name);
  if (s.voxels.empty()) throw EmptyStructure(s.name);
  return s;
}

std::vector<double> doses_of(const PlanModel& plan, const Structure& s) {
  std::vector<double> out;
  out.reserve(s.voxels.size());
  for (auto idx : s.voxels) out.push_back(plan.grid.values[idx]);
  return out;
}

std::size_t count_at_least(const PlanModel& plan, const Structure& s, double threshold) {
  std::size_t n = 0;
  for (auto idx : s.voxels) n += plan.grid.values[idx] >= threshold ? 1 : 0;
  return n;
}

const Structure& non_empty_ptv(const PlanModel& plan) {
  const Structure& ptv = plan.ptv();
  if (ptv.voxels.empty()) throw EmptyStructure(ptv.name);
  return ptv;
}

double d_of(std::vector<double> doses, double volume_percent) {
  const std::size_t n = doses.size();
  // Smallest k whose share 100*k/N reaches p, in the same arithmetic as
  // v_metric so that V and D are exact duals.
  auto share = [n](std::size_t k) { return 100.0 * static_cast<double>(k) / static_cast<double>(n); };
  auto k = static_cast<std::size_t>(std::ceil(volume_percent * static_cast<double>(n) / 100.0));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && share(k - 1) >= volume_percent) --k;
  while (k < n && share(k) < volume_percent) ++k;
  std::nth_element(doses.begin(), doses.begin() + static_cast<std::ptrdiff_t>(k - 1), doses.end(), std::greater<>());
  return doses[k - 1];
}

}  // namespace

CumulativeDvh dvh(const PlanModel& plan, std::string_view structure) {
  const Structure& s = non_empty(plan, structure);
  auto doses = doses_of(plan, s);
  std::sort(doses.begin(), doses.end());
  const double max = doses.back();
  CumulativeDvh out;
  out.structure = s.name;
  const double n = static_cast<double>(doses.size());
  for (long k = 0;; ++k) {
    const double d = static_cast<double>(k) / kDvhBinsPerGy;
    const auto c = static_cast<std::size_t>(doses.end() - std::lower_bound(doses.begin(), doses.end(), d));
    out.bins.emplace_back(d, static_cast<double>(c) / n);
    if (d > max) break;
  }
  return out;
}

double v_threshold(const PlanModel& plan, const Quantity& level) {
  switch (level.unit) {
    case Unit::Percent: return (level.value / 100.0) * plan.prescription.total_dose_gy;
    case Unit::Gy: return level.value;
    default: throw Error("V level must be in % of prescription or Gy, got " + format_value(level));
  }
}

double v_metric(const PlanModel& plan, std::string_view structure, const Quantity& level, VolumeOutput output) {
  const Structure& s = non_empty(plan, structure);
  const std::size_t count = count_at_least(plan, s, v_threshold(plan, level));
  if (output == VolumeOutput::Cc) return static_cast<double>(count) * plan.grid.voxel_cc();
  return 100.0 * static_cast<double>(count) / static_cast<double>(s.voxels.size());
}

double d_metric(const PlanModel& plan, std::string_view structure, double volume_percent) {
  if (!(volume_percent > 0.0 && volume_percent <= 100.0)) {
    throw Error("D volume must be in (0, 100] percent, got " + format_number(volume_percent));
  }
  const Structure& s = non_empty(plan, structure);
  return d_of(doses_of(plan, s), volume_percent);
}

double mean_dose(const PlanModel& plan, std::string_view structure) {
  const Structure& s = non_empty(plan, structure);
  double sum = 0.0;
  for (auto idx : s.voxels) sum += plan.grid.values[idx];
  return sum / static_cast<double>(s.voxels.size());
}

double max_point_dose(const PlanModel& plan, std::string_view structure) {
  const Structure& s = non_empty(plan, structure);
  double m = plan.grid.values[s.voxels.front()];
  for (auto idx : s.voxels) m = std::max(m, plan.grid.values[idx]);
  return m;
}

double volume_cc(const PlanModel& plan, std::string_view structure) {
  const Structure& s = plan.require(structure);
  return static_cast<double>(s.voxels.size()) * plan.grid.voxel_cc();
}

double conformity_index(const PlanModel& plan) {
  const Structure& ptv = non_empty_ptv(plan);
  const double voxel_cc = plan.grid.voxel_cc();
  const double ptv_cc = static_cast<double>(ptv.voxels.size()) * voxel_cc;
  if (ptv_cc == 0.0) throw ZeroPtvVolume("PTV volume is zero");
  const double rx = plan.prescription.total_dose_gy;
  std::size_t covered = 0;
  for (double d : plan.grid.values) covered += d >= rx ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(ptv.voxels.size());
}

double homogeneity_index(const PlanModel& plan) {
  const Structure& ptv = non_empty_ptv(plan);
  const auto doses = doses_of(plan, ptv);
  const double d5 = d_of(doses, 5.0);
  if (d5 == 0.0) throw DivisionByZero("homogeneity index: D5 of PTV is zero");
  return d_of(doses, 95.0) / d5;
}

int count_components(const std::array<int, 3>& dims, const std::vector<char>& mask) {
  std::vector<char> seen(mask.size(), 0);
  auto idx = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * dims[1] + static_cast<std::size_t>(j)) * dims[2] + static_cast<std::size_t>(k);
  };
  static constexpr int kSteps[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  int components = 0;
  std::queue<std::array<int, 3>> frontier;
  for (int i = 0; i < dims[0]; ++i) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int k = 0; k < dims[2]; ++k) {
        const auto start = idx(i, j, k);
        if (!mask[start] || seen[start]) continue;
        ++components;
        seen[start] = 1;
        frontier.push({i, j, k});
        while (!frontier.empty()) {
          const auto [ci, cj, ck] = frontier.front();
          frontier.pop();
          for (const auto& s : kSteps) {
            const int ni = ci + s[0], nj = cj + s[1], nk = ck + s[2];
            if (ni < 0 || nj < 0 || nk < 0 || ni >= dims[0] || nj >= dims[1] || nk >= dims[2]) continue;
            const auto n = idx(ni, nj, nk);
            if (mask[n] && !seen[n]) {
              seen[n] = 1;
              frontier.push({ni, nj, nk});
            }
          }
        }
      }
    }
  }
  return components;
}

int count_cold_spots(const PlanModel& plan) {
  const Structure& ptv = non_empty_ptv(plan);
  const double limit = kColdSpotFraction * plan.prescription.total_dose_gy;
  std::vector<char> mask(plan.grid.size(), 0);
  for (auto idx : ptv.voxels) mask[idx] = plan.grid.values[idx] <= limit ? 1 : 0;
  return count_components(plan.grid.dims, mask);
}

int count_hot_spots(const PlanModel& plan) {
  (void)non_empty_ptv(plan);
  const double limit = kHotSpotFraction * plan.prescription.total_dose_gy;
  std::vector<char> mask(plan.grid.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = plan.grid.values[i] > limit ? 1 : 0;
  return count_components(plan.grid.dims, mask);
}

}  // namespace rtqa::dosimetry
