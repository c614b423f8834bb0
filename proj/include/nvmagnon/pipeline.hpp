#pragma once

// From a validated RunConfig to the quantities every scenario needs:
// resonance field, couplings, bath parameters and the master equation.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nvmagnon/config.hpp"
#include "nvmagnon/measures.hpp"

namespace nvmagnon {

struct ResolvedRun {
  RunConfig config;
  double bias = 0.0;
  std::optional<ResonanceResult> resonance;
  double omega0 = 0.0;
  double epsilon = 0.0;
  double electric = 0.0;
  double electrical_length = 0.0;
  double band_edge_dos = 0.0;
  double nbar0 = 0.0;
  double kappa = 0.0;
  double upper_level_temperature_bound = 0.0;  ///< T with nbar(omega_+) < 0.1
  std::array<QubitCouplings, 2> qubits;
  MasterEqParams master;
  std::vector<std::string> warnings;

  [[nodiscard]] FieldConfig fields() const { return {bias, 0.0, electric}; }
};

/// Runs the derivation chain. `for_dynamics` additionally enforces the
/// symmetric-placement requirement on the dressed frequencies.
ResolvedRun resolve(const RunConfig& cfg, bool for_dynamics);

struct SteadyReport {
  TwoQubitState state;
  int kernel_dimension = 0;
  double slowest_rate = 0.0;
  double c = 0.0, c1 = 0.0, f1 = 0.0, f2 = 0.0;
};

SteadyReport compute_steady(const ResolvedRun& run);

struct EvolutionReport {
  Trajectory trajectory;
  EsdReport esd;
};

/// Needs a time grid in the config. ESD steadiness is reported, not enforced.
EvolutionReport compute_evolution(const ResolvedRun& run);

/// Strip dispersion of the configured mode on the k grid.
std::vector<double> dispersion_table(const ResolvedRun& run);

MarkovReport compute_markov(const ResolvedRun& run);

}  // namespace nvmagnon
