#pragma once

// The displaced thermal magnon bath seen by the qubits: coherence profile,
// moments, the eta-eta correlation function and Markov diagnostics.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "nvmagnon/coupling.hpp"

namespace nvmagnon {

struct BathParams {
  double temperature = 0.0;  ///< K
  double nbar0 = 0.0;        ///< occupation at omega_0
  double epsilon = 0.0;      ///< coherence parameter
  std::vector<cplx> epsilon_k;
  double band_edge_dos = 0.0;  ///< D0 (s)
  double kappa = 0.0;          ///< D0 eta0^2 (1/s)

  void validate() const;
};

/// eps_k = -i eps eta_k / eta0. Throws PhysicsError when eta0 vanishes.
std::vector<cplx> coherence_profile(double epsilon, const KSpaceCouplings& couplings);

/// (B1 / B0) sqrt(s / 2N).
double epsilon_from_fields(double injection, double bias, double spin, int sites);

/// kappa = D0 eta0^2.
double collective_rate(double band_edge_dos, double eta0);

/// Moments of a multimode displaced thermal state with a common occupation.
class DisplacedThermalBath {
 public:
  DisplacedThermalBath(double nbar, std::vector<cplx> epsilon_k);

  [[nodiscard]] std::size_t modes() const { return eps_.size(); }
  [[nodiscard]] cplx mean(std::size_t k) const;                           // <m_k>
  [[nodiscard]] cplx anomalous(std::size_t k, std::size_t q) const;       // <m_k m_q>
  [[nodiscard]] cplx normal(std::size_t k, std::size_t q) const;          // <m_k^dag m_q>
  [[nodiscard]] cplx antinormal(std::size_t k, std::size_t q) const;      // <m_k m_q^dag>

 private:
  double nbar_;
  std::vector<cplx> eps_;
};

/// Prefactors of the collective part of the master equation.
struct CollectivePrefactors {
  double squeezing = 0.0;   ///< kappa eps^2 / 2, multiplies -[D(S+,S+) + D(S-,S-)]
  double emission = 0.0;    ///< kappa (n + 1 + eps^2) / 2, multiplies D(S-,S+)
  double absorption = 0.0;  ///< kappa (n + eps^2) / 2, multiplies D(S+,S-)
};

CollectivePrefactors collective_prefactors(double kappa, double nbar, double epsilon);

/// G(t) = sum_k |eta_k|^2 exp(i omega_k t).
cplx bath_correlation(double t, const std::vector<cplx>& eta_k, const std::vector<double>& omega_k);

struct CorrelationSamples {
  std::vector<double> times;
  std::vector<cplx> values;
};

/// G on t = 0, dt, ..., t_max using a per-mode phasor recurrence.
CorrelationSamples sample_bath_correlation(const std::vector<cplx>& eta_k, const std::vector<double>& omega_k,
                                           double t_max, double dt);

struct CorrelationTime {
  double tau = 0.0;         ///< s
  double window_end = 0.0;  ///< 10 tau
};

/// First t at which |G|/|G(0)| drops below 1/e and stays there up to 10 t.
/// Throws PhysicsError if no such t exists within the samples.
CorrelationTime correlation_time(const CorrelationSamples& samples);

/// First t at which |G|/|G(0)| < level, if any.
std::optional<double> first_crossing(const CorrelationSamples& samples, double level);

/// Mode spacing relative to the bandwidth, sin(ka) pi / (2N).
double mode_spacing_ratio(double ka, int sites);

struct MarkovOptions {
  double t_max = 100e-9;
  double dt = 2e-12;
  double representative_ka = 1.5707963267948966;
  double spacing_limit = 1e-2;
  double separation = 1e-2;  ///< tau_B must be below separation * tau_s
};

struct MarkovReport {
  double mode_spacing = 0.0;
  double representative_ka = 0.0;
  std::optional<double> tau_b;
  std::optional<double> first_crossing_02;  ///< first |G|/|G0| < 0.2
  double tau_s = 0.0;                       ///< 1/kappa
  bool spacing_small = false;
  bool time_scales_separated = false;
  bool markovian = false;
  std::string note;
};

/// Never throws on physics grounds; problems are reported through the flags.
MarkovReport markov_report(const std::vector<cplx>& eta_k, const std::vector<double>& omega_k, int sites,
                           double kappa, const MarkovOptions& options = {});

}  // namespace nvmagnon
