#include "rtqa/facts/plan_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rtqa::facts {

using dosimetry::DoseGrid;
using dosimetry::PlanModel;
using dosimetry::Prescription;
using dosimetry::Structure;

namespace {

const json& member(const json& obj, const std::string& where, const char* name) {
  if (!obj.is_object()) throw SchemaError(where, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw SchemaError(where + "/" + name, "required member is missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where, "expected an integer");
  const auto v = j.get<long long>();
  if (v < 0 || v > 1'000'000'000) throw SchemaError(where, "integer out of range");
  return static_cast<int>(v);
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) throw SchemaError(where, "expected an array");
  if (size && j.size() != *size) throw SchemaError(where, "expected " + std::to_string(*size) + " elements");
  return j;
}

Prescription parse_prescription(const json& j) {
  const std::string at = "/prescription";
  Prescription p;
  const std::string technique = string(member(j, at, "technique"), at + "/technique");
  auto t = dosimetry::parse_technique(technique);
  if (!t) throw SchemaError(at + "/technique", "unknown technique '" + technique + "' (3DCRT, IMRT or VMAT)");
  p.technique = *t;
  p.total_dose_gy = number(member(j, at, "total_dose_gy"), at + "/total_dose_gy");
  p.fractions = integer(member(j, at, "fractions"), at + "/fractions");
  p.dose_per_fraction_gy = number(member(j, at, "dose_per_fraction_gy"), at + "/dose_per_fraction_gy");
  if (p.total_dose_gy <= 0) throw SchemaError(at + "/total_dose_gy", "must be positive");
  if (p.fractions <= 0) throw SchemaError(at + "/fractions", "must be a positive integer");
  if (p.dose_per_fraction_gy <= 0) throw SchemaError(at + "/dose_per_fraction_gy", "must be positive");
  return p;
}

DoseGrid parse_grid(const json& j) {
  const std::string at = "/grid";
  DoseGrid g;
  const json& dims = array(member(j, at, "dims"), at + "/dims", 3);
  for (std::size_t a = 0; a < 3; ++a) {
    g.dims[a] = integer(dims[a], at + "/dims/" + std::to_string(a));
    if (g.dims[a] <= 0) throw SchemaError(at + "/dims/" + std::to_string(a), "must be positive");
  }
  const json& size = array(member(j, at, "voxel_size_mm"), at + "/voxel_size_mm", 3);
  for (std::size_t a = 0; a < 3; ++a) {
    g.voxel_size_mm[a] = number(size[a], at + "/voxel_size_mm/" + std::to_string(a));
    if (g.voxel_size_mm[a] <= 0) throw SchemaError(at + "/voxel_size_mm/" + std::to_string(a), "must be positive");
  }
  const json& values = array(member(j, at, "values"), at + "/values");
  if (values.size() != g.size()) throw GridShapeMismatch(g.size(), values.size());
  g.values.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = number(values[i], at + "/values/" + std::to_string(i));
    if (d < 0) throw SchemaError(at + "/values/" + std::to_string(i), "dose must be >= 0");
    g.values.push_back(d);
  }
  return g;
}

Structure parse_structure(const json& j, std::size_t n, const DoseGrid& grid, const ontology::Ontology& ontology) {
  const std::string at = "/structures/" + std::to_string(n);
  Structure s;
  s.raw_name = string(member(j, at, "name"), at + "/name");
  if (s.raw_name.empty()) throw SchemaError(at + "/name", "must not be empty");
  try {
    s.name = ontology.canonical_structure_name(s.raw_name);
    s.name_conforms = true;
  } catch (const ontology::UnknownStructureName&) {
    s.name = s.raw_name;
    s.name_conforms = false;
  }
  if (j.contains("color")) {
    const std::string raw = string(j.at("color"), at + "/color");
    s.color = ontology::normalize_color(raw).value_or(raw);
  }
  const std::string role = string(member(j, at, "role"), at + "/role");
  auto r = dosimetry::parse_role(role);
  if (!r) throw SchemaError(at + "/role", "unknown role '" + role + "' (GTV, CTV, PTV, OAR or Other)");
  s.role = *r;
  const json& voxels = array(member(j, at, "voxels"), at + "/voxels");
  std::set<std::size_t> seen;
  for (std::size_t v = 0; v < voxels.size(); ++v) {
    const std::string vat = at + "/voxels/" + std::to_string(v);
    const json& ijk = array(voxels[v], vat, 3);
    std::array<int, 3> c{};
    for (std::size_t a = 0; a < 3; ++a) {
      if (!ijk[a].is_number_integer()) throw SchemaError(vat + "/" + std::to_string(a), "expected an integer");
      const auto x = ijk[a].get<long long>();
      if (x < 0 || x >= grid.dims[a]) {
        throw SchemaError(vat + "/" + std::to_string(a), "voxel index " + std::to_string(x) + " outside grid dims");
      }
      c[a] = static_cast<int>(x);
    }
    if (!seen.insert(grid.index(c[0], c[1], c[2])).second) throw SchemaError(vat, "duplicate voxel");
  }
  s.voxels.assign(seen.begin(), seen.end());
  return s;
}

}  // namespace

GridShapeMismatch::GridShapeMismatch(std::size_t e, std::size_t a)
    : Error("/grid/values: grid has " + std::to_string(e) + " voxels but " + std::to_string(a) + " dose values"),
      expected(e),
      actual(a) {}

PlanModel ingest_plan(const json& doc, const ontology::Ontology& ontology) {
  if (!doc.is_object()) throw SchemaError("", "plan must be a JSON object");
  PlanModel plan;
  plan.prescription = parse_prescription(member(doc, "", "prescription"));
  plan.grid = parse_grid(member(doc, "", "grid"));
  const json& structures = array(member(doc, "", "structures"), "/structures");
  std::set<std::string> names;
  for (std::size_t n = 0; n < structures.size(); ++n) {
    Structure s = parse_structure(structures[n], n, plan.grid, ontology);
    if (!names.insert(s.name).second) {
      throw SchemaError("/structures/" + std::to_string(n) + "/name", "duplicate structure '" + s.name + "'");
    }
    plan.structures.push_back(std::move(s));
  }
  return plan;
}

PlanModel ingest_plan_file(const std::filesystem::path& path, const ontology::Ontology& ontology) {
  return ingest_plan(read_json_file(path), ontology);
}

json plan_to_json(const PlanModel& plan) {
  const auto& p = plan.prescription;
  json out;
  out["prescription"] = {{"technique", std::string(dosimetry::to_string(p.technique))},
                         {"total_dose_gy", p.total_dose_gy},
                         {"fractions", p.fractions},
                         {"dose_per_fraction_gy", p.dose_per_fraction_gy}};
  out["grid"] = {{"dims", plan.grid.dims}, {"voxel_size_mm", plan.grid.voxel_size_mm}, {"values", plan.grid.values}};
  json structures = json::array();
  for (const auto& s : plan.structures) {
    json js;
    js["name"] = s.raw_name.empty() ? s.name : s.raw_name;
    if (s.color) js["color"] = *s.color;
    js["role"] = dosimetry::to_string(s.role);
    json voxels = json::array();
    for (auto idx : s.voxels) voxels.push_back(plan.grid.coords(idx));
    js["voxels"] = std::move(voxels);
    structures.push_back(std::move(js));
  }
  out["structures"] = std::move(structures);
  return out;
}

}  // namespace rtqa::facts
