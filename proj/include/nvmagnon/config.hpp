#pragma once

// JSON run configuration. Every physical quantity is a {value, unit} pair;
// units are checked against a whitelist and converted to SI (angular
// frequencies in rad/s) here, nowhere else.

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nvmagnon/bath.hpp"
#include "nvmagnon/coupling.hpp"
#include "nvmagnon/dynamics.hpp"
#include "nvmagnon/magnonics.hpp"
#include "nvmagnon/state.hpp"

namespace nvmagnon {

using json = nlohmann::json;

enum class Dimension {
  dimensionless,
  frequency,     // converted to rad/s
  gyromagnetic,  // rad/(s T)
  field,         // T
  length,        // m
  time,          // s
  temperature,   // K
  electric,      // V/m
  stiffness,     // J/m
  energy,        // J
};

/// Converts `node` ({value, unit}, a bare number for dimensionless
/// quantities, or "inf" when allowed) to SI. `path` names the field in errors.
double read_quantity(const json& node, Dimension dim, const std::string& path, bool allow_inf = false);

/// Units accepted for a dimension.
std::vector<std::string> accepted_units(Dimension dim);

struct TimeGridConfig {
  double t_max = 0.0;
  int samples = 0;
  GridKind kind = GridKind::linear;
  double t_min = 0.0;
};

struct SweepConfig {
  std::string path;
  std::vector<json> values;
};

struct RunConfig {
  std::string scenario;
  MaterialParams material;
  StripGeometry geometry;
  NVParams nv;

  std::optional<double> bias;  ///< nullopt: solve the resonance condition
  std::optional<double> injection;
  std::optional<double> epsilon;
  std::optional<double> electric;
  std::optional<double> band_edge_dos;
  std::string b1_profile = "eta";
  double temperature = 0.0;

  std::string initial_name = "plus-minus";
  TwoQubitState initial = TwoQubitState::plus_minus();
  std::optional<TimeGridConfig> time;
  Frame frame = Frame::rotating;
  std::optional<SweepConfig> sweep;
  MarkovOptions markov;
  double kernel_tolerance = 1e-12;
  double esd_floor = 1e-4;
  std::string output;

  json document;  ///< the full source document
};

/// Parses and validates. Throws ValidationError naming the offending field.
RunConfig parse_config(const json& doc);

/// Reference YIG and NV defaults as a config document (scenario left empty).
json default_document();

/// Sets the leaf at a dotted path ("nv.T1", "nv.x_positions.0"). A bare
/// number replaces only the value of an existing {value, unit} leaf.
void set_path(json& doc, const std::string& path, const json& value);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const json& doc);

}  // namespace nvmagnon
