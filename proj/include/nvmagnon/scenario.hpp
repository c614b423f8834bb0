#pragma once

// Scenario runner behind the command line tool: executes a pipeline, writes
// CSV tables and the run manifest.

#include <optional>
#include <string>
#include <vector>

#include "nvmagnon/config.hpp"
#include "nvmagnon/pipeline.hpp"

namespace nvmagnon {

inline constexpr const char* version_string = "0.3.0";

const std::vector<std::string>& scenario_names();

struct RunOptions {
  std::string out_dir;    ///< empty: compute only, write nothing
  unsigned workers = 0;   ///< sweep pool size, 0 = hardware concurrency
  bool markov = true;     ///< sample the bath correlation for the manifest
};

struct SweepRow {
  json value;
  std::string error;
  double bias = 0.0, epsilon = 0.0, nbar0 = 0.0, band_edge_dos = 0.0, kappa = 0.0, eta0 = 0.0, omega = 0.0;
  int kernel_dimension = 0;
  double c_ss = 0.0, c1_ss = 0.0, f1 = 0.0, f2 = 0.0;
  bool has_evolution = false;
  std::size_t deaths = 0, revivals = 0;
  std::optional<double> first_death, first_revival;
  double transient_peak = 0.0;
  bool steady = false;
};

/// One row per value in input order; failures land in `error`.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, unsigned workers);

/// Runs `scenario` (overrides the document's own) and returns the manifest.
json run_scenario(const json& doc, const std::string& scenario, const RunOptions& options);

/// Manifest block with the derived parameters of a resolved run.
json resolved_json(const ResolvedRun& run);
json markov_json(const MarkovReport& r);

/// Embedded presets.
const std::vector<std::string>& preset_names();
std::optional<json> find_preset(const std::string& name);

}  // namespace nvmagnon
