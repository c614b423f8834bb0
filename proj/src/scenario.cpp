#include "nvmagnon/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include "nvmagnon/constants.hpp"
#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace fs = std::filesystem;

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"couplings", "dispersion", "resonance", "evolve", "steady", "sweep"};
  return names;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(num(v));
    row(s);
  }

 private:
  std::ofstream out_;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_json(const Matrix4c& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 4; ++i) {
    json rr = json::array(), ii = json::array();
    for (int j = 0; j < 4; ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

json esd_json(const EsdReport& e) {
  return {{"death_times_s", e.death_times}, {"revival_times_s", e.revival_times},
          {"transient_peak", e.transient_peak}, {"C_ss", e.c_ss},
          {"C1_ss", e.c1_ss}, {"steady", e.steady},
          {"steady_spread", e.steady_spread}};
}

void write_trajectory(const fs::path& path, const Trajectory& tr) {
  std::vector<std::string> header{"t[s]"};
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      header.push_back("re_rho" + std::to_string(i) + std::to_string(j) + "[1]");
      header.push_back("im_rho" + std::to_string(i) + std::to_string(j) + "[1]");
    }
  for (const char* h : {"C[1]", "C1[1]", "F_dfs1[1]", "F_dfs2[1]"}) header.push_back(h);
  Csv csv(path, header);
  for (std::size_t n = 0; n < tr.times.size(); ++n) {
    std::vector<double> row{tr.times[n]};
    const auto& m = tr.states[n].matrix();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        row.push_back(m(i, j).real());
        row.push_back(m(i, j).imag());
      }
    row.push_back(tr.concurrence[n]);
    row.push_back(tr.coherence[n]);
    row.push_back(tr.fidelity_dfs1[n]);
    row.push_back(tr.fidelity_dfs2[n]);
    csv.row(row);
  }
}

void write_couplings(const fs::path& dir, const ResolvedRun& run) {
  Csv sites(dir / "couplings.csv", {"qubit", "j", "x_j[m]", "theta[rad]", "A[rad/s]", "B[rad/s]", "C[rad/s]",
                                    "xi[rad/s]", "zeta[rad/s]", "eta[rad/s]"});
  const int n = run.config.geometry.sites;
  for (int q = 0; q < 2; ++q) {
    const auto& s = run.qubits[q].site;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const int j = static_cast<int>(i) - n / 2 + (static_cast<int>(i) >= n / 2 ? 1 : 0);
      sites.row({std::to_string(q + 1), std::to_string(j), num(s.x[i]), num(s.theta[i]), num(s.a[i]), num(s.b[i]),
                 num(s.c[i]), num(s.xi[i]), num(s.zeta[i]), num(s.eta[i])});
    }
  }
  Csv ks(dir / "kspace.csv", {"qubit", "m", "k[rad/m]", "re_xi[rad/s]", "im_xi[rad/s]", "re_zeta[rad/s]",
                              "im_zeta[rad/s]", "re_eta[rad/s]", "im_eta[rad/s]"});
  for (int q = 0; q < 2; ++q) {
    const auto& k = run.qubits[q].kspace;
    for (std::size_t i = 0; i < k.k.size(); ++i)
      ks.row({std::to_string(q + 1), std::to_string(static_cast<int>(i) - n / 2), num(k.k[i]), num(k.xi[i].real()),
              num(k.xi[i].imag()), num(k.zeta[i].real()), num(k.zeta[i].imag()), num(k.eta[i].real()),
              num(k.eta[i].imag())});
  }
}

std::string value_cell(const json& v) {
  if (v.is_number()) return num(v.get<double>());
  if (v.is_object() && v.contains("value") && v["value"].is_number()) return num(v["value"].get<double>());
  if (v.is_object() && v.contains("value") && v["value"].is_string()) return v["value"].get<std::string>();
  if (v.is_string()) return v.get<std::string>();
  return "";
}

std::string unit_cell(const json& v) {
  if (v.is_object() && v.contains("unit") && v["unit"].is_string()) return v["unit"].get<std::string>();
  return "";
}

std::string csv_text(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

void write_sweep(const fs::path& path, const std::vector<SweepRow>& rows) {
  Csv csv(path, {"index", "value", "unit", "B0[T]", "epsilon[1]", "nbar0[1]", "D0[s]", "kappa[1/s]", "eta0[rad/s]",
                 "Omega[rad/s]", "kernel_dim", "C_ss[1]", "C1_ss[1]", "F_dfs1[1]", "F_dfs2[1]", "deaths",
                 "revivals", "first_death[s]", "first_revival[s]", "transient_peak[1]", "steady", "error"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::vector<std::string> cells{std::to_string(i), value_cell(r.value), unit_cell(r.value)};
    if (r.error.empty()) {
      for (double v : {r.bias, r.epsilon, r.nbar0, r.band_edge_dos, r.kappa, r.eta0, r.omega}) cells.push_back(num(v));
      cells.push_back(std::to_string(r.kernel_dimension));
      for (double v : {r.c_ss, r.c1_ss, r.f1, r.f2}) cells.push_back(num(v));
      if (r.has_evolution) {
        cells.push_back(std::to_string(r.deaths));
        cells.push_back(std::to_string(r.revivals));
        cells.push_back(r.first_death ? num(*r.first_death) : "");
        cells.push_back(r.first_revival ? num(*r.first_revival) : "");
        cells.push_back(num(r.transient_peak));
        cells.push_back(r.steady ? "1" : "0");
      } else {
        cells.insert(cells.end(), 6, "");
      }
      cells.push_back("");
    } else {
      cells.insert(cells.end(), 18, "");
      cells.push_back(csv_text(r.error));
    }
    csv.row(cells);
  }
}

SweepRow sweep_row(const RunConfig& base, const json& value) {
  SweepRow row;
  row.value = value;
  try {
    json doc = base.document;
    set_path(doc, base.sweep->path, value);
    doc.erase("sweep");
    const auto cfg = parse_config(doc);
    const auto run = resolve(cfg, true);
    row.bias = run.bias;
    row.epsilon = run.epsilon;
    row.nbar0 = run.nbar0;
    row.band_edge_dos = run.band_edge_dos;
    row.kappa = run.kappa;
    row.eta0 = run.master.eta0;
    row.omega = run.master.omega;
    const auto ss = compute_steady(run);
    row.kernel_dimension = ss.kernel_dimension;
    row.c_ss = ss.c;
    row.c1_ss = ss.c1;
    row.f1 = ss.f1;
    row.f2 = ss.f2;
    if (cfg.time) {
      const auto ev = compute_evolution(run);
      row.has_evolution = true;
      row.deaths = ev.esd.death_times.size();
      row.revivals = ev.esd.revival_times.size();
      if (!ev.esd.death_times.empty()) row.first_death = ev.esd.death_times.front();
      if (!ev.esd.revival_times.empty()) row.first_revival = ev.esd.revival_times.front();
      row.transient_peak = ev.esd.transient_peak;
      row.steady = ev.esd.steady;
    }
  } catch (const ValidationError& e) {
    row.error = std::string("validation: ") + e.what();
  } catch (const PhysicsError& e) {
    row.error = std::string("physics: ") + e.what();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& cfg, unsigned workers) {
  if (!cfg.sweep) throw ValidationError("sweep", "a sweep block is required for this scenario");
  const auto& values = cfg.sweep->values;
  std::vector<SweepRow> rows(values.size());
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(values.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) rows[i] = sweep_row(cfg, values[i]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

json markov_json(const MarkovReport& r) {
  return {{"mode_spacing_ratio", r.mode_spacing},
          {"representative_ka", r.representative_ka},
          {"tau_B_s", opt(r.tau_b)},
          {"first_crossing_0.2_s", opt(r.first_crossing_02)},
          {"tau_s_s", finite_or_null(r.tau_s)},
          {"mode_spacing_small", r.spacing_small},
          {"time_scales_separated", r.time_scales_separated},
          {"markovian", r.markovian},
          {"note", r.note}};
}

json resolved_json(const ResolvedRun& run) {
  const auto& q1 = run.qubits[0];
  json res = {
      {"B0_T", run.bias},
      {"omega0_rad_s", run.omega0},
      {"epsilon", run.epsilon},
      {"E_V_per_m", run.electric},
      {"L_E_m", run.electrical_length},
      {"D0_s", run.band_edge_dos},
      {"nbar0", run.nbar0},
      {"kappa_per_s", run.kappa},
      {"tau_s_s", run.kappa > 0.0 ? json(1.0 / run.kappa) : json(nullptr)},
      {"d_rad_s", q1.site.d},
      {"eta0_rad_s", q1.kspace.eta0},
      {"zeta0_rad_s", q1.kspace.zeta0},
      {"xi0_rad_s", q1.kspace.xi0},
      {"alpha_rad_s", {run.qubits[0].dressing.alpha, run.qubits[1].dressing.alpha}},
      {"beta_rad_s", {run.qubits[0].dressing.beta, run.qubits[1].dressing.beta}},
      {"phi_rad", {run.qubits[0].dressing.phi, run.qubits[1].dressing.phi}},
      {"Omega_rad_s", {run.qubits[0].dressing.big_omega, run.qubits[1].dressing.big_omega}},
      {"x_positions_m", {run.config.nv.positions[0], run.config.nv.positions[1]}},
      {"kappa_NV_per_s", run.master.kappa_nv},
      {"kappa_NV_deph_per_s", run.master.kappa_deph},
      {"frame", to_string(run.master.frame)},
      {"initial_state", run.config.initial_name},
      {"upper_level_temperature_bound_K", run.upper_level_temperature_bound},
  };
  if (run.resonance)
    res["resonance"] = {{"B0_T", run.resonance->bias},
                        {"residual_rad_s", run.resonance->residual},
                        {"iterations", run.resonance->iterations}};
  return res;
}

json run_scenario(const json& doc, const std::string& scenario_in, const RunOptions& options) {
  std::string scenario = scenario_in;
  if (scenario.empty() && doc.contains("scenario") && doc["scenario"].is_string()) scenario = doc["scenario"];
  bool known = false;
  for (const auto& s : scenario_names()) known = known || s == scenario;
  if (!known) throw ValidationError("scenario", "unknown scenario '" + scenario + "'");

  json user = doc;
  user["scenario"] = scenario;
  const RunConfig cfg = parse_config(user);

  const bool writes = !options.out_dir.empty();
  const fs::path dir = options.out_dir;
  if (writes) fs::create_directories(dir);

  json manifest = {{"tool", "nvmagnon"},
                   {"version", version_string},
                   {"scenario", scenario},
                   {"config_hash", config_hash(cfg.document)},
                   {"timestamp", timestamp()},
                   {"config", cfg.document}};
  json outputs = json::array();
  json results = json::object();
  std::vector<std::string> warnings;

  const bool dynamics = scenario == "evolve" || scenario == "steady" || scenario == "sweep";
  std::optional<ResolvedRun> run;
  if (scenario == "sweep") {
    // the base point is only informational; rows carry their own errors
    try {
      run = resolve(cfg, true);
    } catch (const std::exception& e) {
      warnings.push_back(std::string("base configuration does not resolve: ") + e.what());
    }
  } else {
    run = resolve(cfg, dynamics);
  }
  if (run) {
    manifest["resolved"] = resolved_json(*run);
    warnings.insert(warnings.end(), run->warnings.begin(), run->warnings.end());
    if (options.markov) {
      const auto mk = compute_markov(*run);
      manifest["markov"] = markov_json(mk);
      if (!mk.markovian) warnings.push_back("Markov diagnostics not satisfied: " + mk.note);
    }
  }

  if (scenario == "couplings") {
    if (writes) {
      write_couplings(dir, *run);
      outputs.push_back("couplings.csv");
      outputs.push_back("kspace.csv");
    }
    results = {{"d_over_2pi_Hz", run->qubits[0].site.d / constants::two_pi},
               {"eta0_rad_s", run->qubits[0].kspace.eta0},
               {"zeta0_rad_s", run->qubits[0].kspace.zeta0},
               {"xi0_rad_s", run->qubits[0].kspace.xi0}};
  } else if (scenario == "dispersion") {
    const auto w = dispersion_table(*run);
    if (writes) {
      const auto& k = run->qubits[0].kspace.k;
      const double a = cfg.material.lattice;
      Csv csv(dir / "dispersion.csv", {"k[rad/m]", "ka[1]", "omega_strip[rad/s]", "omega_chain[rad/s]"});
      for (std::size_t i = 0; i < k.size(); ++i)
        csv.row(std::vector<double>{k[i], k[i] * a, w[i], chain_dispersion(k[i], cfg.material, run->bias)});
      outputs.push_back("dispersion.csv");
      const auto g = sample_bath_correlation(run->qubits[0].kspace.eta, w, cfg.markov.t_max, cfg.markov.dt);
      Csv cc(dir / "correlation.csv", {"t[s]", "re_G[rad^2/s^2]", "im_G[rad^2/s^2]", "abs_G_over_G0[1]"});
      const double g0 = std::abs(g.values.front());
      for (std::size_t i = 0; i < g.times.size(); ++i)
        cc.row(std::vector<double>{g.times[i], g.values[i].real(), g.values[i].imag(), std::abs(g.values[i]) / g0});
      outputs.push_back("correlation.csv");
    }
    results = {{"omega_k0_rad_s", w[run->qubits[0].kspace.zero_index]},
               {"band_edge_dos_s", run->band_edge_dos}};
  } else if (scenario == "resonance") {
    results = {{"B0_T", run->bias},
               {"B0_mT", run->bias * 1e3},
               {"Omega_rad_s", run->qubits[0].dressing.big_omega},
               {"gamma0_B0_rad_s", run->omega0}};
  } else if (scenario == "steady") {
    const auto ss = compute_steady(*run);
    results = {{"C_ss", ss.c},           {"C1_ss", ss.c1},
               {"F_dfs1", ss.f1},        {"F_dfs2", ss.f2},
               {"kernel_dimension", ss.kernel_dimension},
               {"slowest_rate_per_s", finite_or_null(ss.slowest_rate)},
               {"rho", matrix_json(ss.state.matrix())}};
  } else if (scenario == "evolve") {
    const auto ev = compute_evolution(*run);
    const auto& tr = ev.trajectory;
    if (writes) {
      write_trajectory(dir / "trajectory.csv", tr);
      outputs.push_back("trajectory.csv");
    }
    if (!ev.esd.steady) warnings.push_back("trajectory has not reached a steady state by t_max");
    results = {{"esd", esd_json(ev.esd)},
               {"final_C", tr.concurrence.back()},
               {"final_C1", tr.coherence.back()},
               {"final_rho", matrix_json(tr.states.back().matrix())},
               {"max_trace_drift", tr.max_trace_drift},
               {"max_hermiticity_drift", tr.max_hermiticity_drift},
               {"matrix_exponential_fallback", tr.used_fallback}};
  } else {  // sweep
    const auto rows = run_sweep(cfg, options.workers);
    if (writes) {
      write_sweep(dir / "sweep.csv", rows);
      outputs.push_back("sweep.csv");
    }
    json js = json::array();
    std::size_t failed = 0;
    for (const auto& r : rows) {
      failed += r.error.empty() ? 0 : 1;
      js.push_back({{"value", r.value}, {"C_ss", r.c_ss}, {"C1_ss", r.c1_ss}, {"error", r.error}});
    }
    results = {{"path", cfg.sweep->path}, {"rows", js}, {"failed_rows", failed}};
  }

  manifest["results"] = results;
  manifest["warnings"] = warnings;
  outputs.push_back("manifest.json");
  manifest["outputs"] = outputs;
  if (writes) {
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
  }
  return manifest;
}

}  // namespace nvmagnon
