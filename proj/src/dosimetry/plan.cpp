#include "rtqa/dosimetry/plan.hpp"

#include <cmath>

namespace rtqa::dosimetry {

std::string_view to_string(Technique t) {
  switch (t) {
    case Technique::ThreeDCRT: return "3DCRT";
    case Technique::IMRT: return "IMRT";
    case Technique::VMAT: return "VMAT";
  }
  return "3DCRT";
}

std::optional<Technique> parse_technique(std::string_view text) {
  const std::string up = to_upper(text);
  if (up == "3DCRT" || up == "3D-CRT") return Technique::ThreeDCRT;
  if (up == "IMRT") return Technique::IMRT;
  if (up == "VMAT") return Technique::VMAT;
  return std::nullopt;
}

bool Prescription::consistent() const {
  return std::fabs(total_dose_gy - fractions * dose_per_fraction_gy) <= kPrescriptionTolerance;
}

std::string to_string(const StructureRole& role) {
  switch (role.kind) {
    case RoleKind::Target:
      switch (role.target.value_or(TargetKind::PTV)) {
        case TargetKind::GTV: return "GTV";
        case TargetKind::CTV: return "CTV";
        case TargetKind::PTV: return "PTV";
      }
      return "PTV";
    case RoleKind::Oar: return "OAR";
    case RoleKind::Other: return "Other";
  }
  return "Other";
}

std::optional<StructureRole> parse_role(std::string_view text) {
  const std::string up = to_upper(text);
  if (up == "GTV") return StructureRole{RoleKind::Target, TargetKind::GTV};
  if (up == "CTV") return StructureRole{RoleKind::Target, TargetKind::CTV};
  if (up == "PTV") return StructureRole{RoleKind::Target, TargetKind::PTV};
  if (up == "OAR") return StructureRole{RoleKind::Oar, std::nullopt};
  if (up == "OTHER") return StructureRole{RoleKind::Other, std::nullopt};
  return std::nullopt;
}

std::size_t DoseGrid::size() const {
  return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(dims[2]);
}

std::size_t DoseGrid::index(int i, int j, int k) const {
  return (static_cast<std::size_t>(i) * dims[1] + static_cast<std::size_t>(j)) * dims[2] + static_cast<std::size_t>(k);
}

std::array<int, 3> DoseGrid::coords(std::size_t idx) const {
  const int k = static_cast<int>(idx % dims[2]);
  idx /= dims[2];
  const int j = static_cast<int>(idx % dims[1]);
  const int i = static_cast<int>(idx / dims[1]);
  return {i, j, k};
}

bool DoseGrid::in_bounds(int i, int j, int k) const {
  return i >= 0 && j >= 0 && k >= 0 && i < dims[0] && j < dims[1] && k < dims[2];
}

double DoseGrid::voxel_cc() const { return voxel_size_mm[0] * voxel_size_mm[1] * voxel_size_mm[2] / 1000.0; }

const Structure* PlanModel::find(std::string_view name) const {
  for (const auto& s : structures) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const Structure& PlanModel::require(std::string_view name) const {
  if (const Structure* s = find(name)) return *s;
  throw UnknownStructure(std::string(name));
}

const Structure& PlanModel::ptv() const {
  if (const Structure* s = find("PTV")) return *s;
  for (const auto& s : structures) {
    if (s.role.kind == RoleKind::Target && s.role.target == TargetKind::PTV) return s;
  }
  throw UnknownStructure("PTV");
}

UnknownStructure::UnknownStructure(std::string n) : Error("unknown structure '" + n + "'"), name(std::move(n)) {}

EmptyStructure::EmptyStructure(std::string n) : Error("structure '" + n + "' has no voxels"), name(std::move(n)) {}

}  // namespace rtqa::dosimetry
