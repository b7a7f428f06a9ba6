#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rtqa/value.hpp"

namespace rtqa::dosimetry {

enum class Technique { ThreeDCRT, IMRT, VMAT };

// "3DCRT", "IMRT", "VMAT"
std::string_view to_string(Technique t);
std::optional<Technique> parse_technique(std::string_view text);

inline constexpr double kPrescriptionTolerance = 1e-6;

struct Prescription {
  Technique technique = Technique::ThreeDCRT;
  double total_dose_gy = 0.0;
  int fractions = 0;
  double dose_per_fraction_gy = 0.0;

  // |total - fractions * per_fraction| <= 1e-6 Gy
  bool consistent() const;
};

enum class RoleKind { Target, Oar, Other };
enum class TargetKind { GTV, CTV, PTV };

struct StructureRole {
  RoleKind kind = RoleKind::Other;
  std::optional<TargetKind> target;  // Target only

  friend bool operator==(const StructureRole&, const StructureRole&) = default;
};

// "GTV", "CTV", "PTV", "OAR", "Other"
std::string to_string(const StructureRole& role);
std::optional<StructureRole> parse_role(std::string_view text);

// Row-major dose grid: index = (i * ny + j) * nz + k.
struct DoseGrid {
  std::array<int, 3> dims{0, 0, 0};
  std::array<double, 3> voxel_size_mm{0.0, 0.0, 0.0};
  std::vector<double> values;

  std::size_t size() const;
  std::size_t index(int i, int j, int k) const;
  std::array<int, 3> coords(std::size_t index) const;
  bool in_bounds(int i, int j, int k) const;
  double voxel_cc() const;
};

struct Structure {
  std::string name;      // canonical when the ontology knows it, otherwise raw
  std::string raw_name;  // as written in the plan
  bool name_conforms = true;
  std::optional<std::string> color;  // normalized palette color when recognized, else raw
  StructureRole role;
  std::vector<std::size_t> voxels;  // flat grid indices, sorted, unique
};

struct PlanModel {
  Prescription prescription;
  DoseGrid grid;
  std::vector<Structure> structures;

  const Structure* find(std::string_view name) const;
  // Throws UnknownStructure.
  const Structure& require(std::string_view name) const;
  // The structure named "PTV", else the first with target role PTV.
  // Throws UnknownStructure("PTV").
  const Structure& ptv() const;
};

class UnknownStructure : public Error {
 public:
  explicit UnknownStructure(std::string name);
  std::string name;
};

class EmptyStructure : public Error {
 public:
  explicit EmptyStructure(std::string name);
  std::string name;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class ZeroPtvVolume : public Error {
 public:
  using Error::Error;
};

}  // namespace rtqa::dosimetry
