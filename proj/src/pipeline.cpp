#include "nvmagnon/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace {

std::string format(const char* fmt, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

ResolvedRun resolve(const RunConfig& cfg, bool for_dynamics) {
  ResolvedRun run;
  run.config = cfg;
  const auto& mat = cfg.material;
  const auto& geo = cfg.geometry;
  const auto& nv = cfg.nv;

  if (cfg.bias) {
    run.bias = *cfg.bias;
  } else {
    const auto site = dipolar_site_coefficients(nv.positions[0], nv, mat, geo);
    run.resonance = solve_resonance(site, nv, mat);
    run.bias = run.resonance->bias;
  }
  run.omega0 = band_bottom(mat, run.bias);
  for (int i = 0; i < 2; ++i) run.qubits[i] = couple_qubit(nv.positions[i], nv, mat, geo, run.bias);

  if (cfg.electric)
    run.electric = *cfg.electric;
  else if (cfg.band_edge_dos)
    run.electric = electric_field_for_band_edge_dos(*cfg.band_edge_dos, mat, geo);
  FieldConfig fc{run.bias, cfg.injection.value_or(0.0), run.electric};
  fc.validate();
  run.electrical_length = electrical_length(run.electric, mat);
  run.band_edge_dos = strip_dos_band_edge(mat, geo, fc);

  if (cfg.epsilon)
    run.epsilon = *cfg.epsilon;
  else if (cfg.injection)
    run.epsilon = epsilon_from_fields(*cfg.injection, run.bias, mat.spin, geo.sites);
  const double eps_max = epsilon_from_fields(FieldConfig::saturation_field, run.bias, mat.spin, geo.sites);
  if (run.epsilon > eps_max)
    run.warnings.push_back("epsilon " + format("%.6g", run.epsilon) + " exceeds the value " +
                           format("%.6g", eps_max) + " reachable with B1 at the 0.5 T saturation bound");
  if (cfg.b1_profile != "eta")
    run.warnings.push_back("b1_profile '" + cfg.b1_profile +
                           "': non-Markovian risk, unsupported; dynamics use the eta-shaped profile");

  run.nbar0 = thermal_occupation(run.omega0, cfg.temperature);
  const double eta0 = run.qubits[0].kspace.eta0;
  run.kappa = collective_rate(run.band_edge_dos, eta0);
  run.upper_level_temperature_bound =
      occupation_temperature_bound(nv.zero_field_splitting + nv.gamma_nv * run.bias, 0.1);
  if (cfg.temperature > run.upper_level_temperature_bound)
    run.warnings.push_back("temperature exceeds the two-level validity bound of " +
                           format("%.4g", run.upper_level_temperature_bound) + " K");

  const double om1 = run.qubits[0].dressing.big_omega, om2 = run.qubits[1].dressing.big_omega;
  if (for_dynamics && std::abs(om1 - om2) > 1e-6 * std::abs(om1))
    throw ValidationError("nv.x_positions",
                          "qubits must be placed symmetrically (dressed frequencies differ by " +
                              format("%.3g", std::abs(om1 - om2) / std::abs(om1)) + " relative)");

  auto& p = run.master;
  p.kappa = run.kappa;
  p.nbar0 = run.nbar0;
  p.epsilon = run.epsilon;
  p.eta0 = eta0;
  p.omega = om1;
  p.kappa_nv = std::isinf(nv.t1) ? 0.0 : 1.0 / nv.t1;
  p.kappa_deph = std::isinf(nv.t2) ? 0.0 : 1.0 / nv.t2;
  p.frame = cfg.frame;
  p.validate();
  return run;
}

SteadyReport compute_steady(const ResolvedRun& run) {
  const auto l = build_liouvillian(run.master);
  SteadyStateOptions opt;
  opt.kernel_tolerance = run.config.kernel_tolerance;
  const auto ss = steady_state(l, run.config.initial, opt);
  SteadyReport r;
  r.state = ss.state;
  r.kernel_dimension = ss.kernel_dimension;
  r.slowest_rate = ss.slowest_rate;
  r.c = concurrence(ss.state);
  r.c1 = l1_coherence(ss.state);
  const auto f = dfs_fidelities(ss.state);
  r.f1 = f.first;
  r.f2 = f.second;
  return r;
}

EvolutionReport compute_evolution(const ResolvedRun& run) {
  if (!run.config.time) throw ValidationError("time", "a time grid is required for this scenario");
  const auto& tg = *run.config.time;
  const auto times = time_grid(tg.t_max, tg.samples, tg.kind, tg.t_min);
  EvolutionReport r;
  r.trajectory = evolve(run.config.initial, build_liouvillian(run.master), times);
  EsdOptions eo;
  eo.floor = run.config.esd_floor;
  eo.require_steady = false;
  r.esd = detect_esd(r.trajectory, eo);
  return r;
}

std::vector<double> dispersion_table(const ResolvedRun& run) {
  return strip_dispersion_table(run.qubits[0].kspace.k, run.config.material, run.config.geometry, run.fields());
}

MarkovReport compute_markov(const ResolvedRun& run) {
  return markov_report(run.qubits[0].kspace.eta, dispersion_table(run), run.config.geometry.sites, run.kappa,
                       run.config.markov);
}

}  // namespace nvmagnon
