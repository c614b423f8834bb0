#include "nvmagnon/bath.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nvmagnon/constants.hpp"
#include "nvmagnon/errors.hpp"

namespace nvmagnon {

void BathParams::validate() const {
  if (temperature < 0.0) throw ValidationError("bath.T", "must be non-negative");
  if (nbar0 < 0.0) throw ValidationError("bath.nbar0", "must be non-negative");
  if (epsilon < 0.0) throw ValidationError("bath.epsilon", "must be non-negative");
  if (band_edge_dos < 0.0) throw ValidationError("bath.D0", "must be non-negative");
  if (kappa < 0.0) throw ValidationError("bath.kappa", "must be non-negative");
}

std::vector<cplx> coherence_profile(double epsilon, const KSpaceCouplings& couplings) {
  if (couplings.eta0 == 0.0) throw PhysicsError("coherence profile undefined: eta0 vanishes");
  std::vector<cplx> out(couplings.eta.size());
  const cplx pre(0.0, -epsilon / couplings.eta0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = pre * couplings.eta[i];
  return out;
}

double epsilon_from_fields(double injection, double bias, double spin, int sites) {
  if (!(bias > 0.0)) throw ValidationError("fields.B0", "must be positive");
  return injection / bias * std::sqrt(spin / (2.0 * sites));
}

double collective_rate(double band_edge_dos, double eta0) {
  if (band_edge_dos < 0.0) throw ValidationError("bath.D0", "must be non-negative");
  return band_edge_dos * eta0 * eta0;
}

DisplacedThermalBath::DisplacedThermalBath(double nbar, std::vector<cplx> epsilon_k)
    : nbar_(nbar), eps_(std::move(epsilon_k)) {
  if (nbar < 0.0) throw ValidationError("bath.nbar0", "must be non-negative");
}

cplx DisplacedThermalBath::mean(std::size_t k) const { return -eps_.at(k); }

cplx DisplacedThermalBath::anomalous(std::size_t k, std::size_t q) const { return eps_.at(k) * eps_.at(q); }

cplx DisplacedThermalBath::normal(std::size_t k, std::size_t q) const {
  return (k == q ? nbar_ : 0.0) + std::conj(eps_.at(k)) * eps_.at(q);
}

cplx DisplacedThermalBath::antinormal(std::size_t k, std::size_t q) const {
  return (k == q ? nbar_ + 1.0 : 0.0) + eps_.at(k) * std::conj(eps_.at(q));
}

CollectivePrefactors collective_prefactors(double kappa, double nbar, double epsilon) {
  const double e2 = epsilon * epsilon;
  return {0.5 * kappa * e2, 0.5 * kappa * (nbar + 1.0 + e2), 0.5 * kappa * (nbar + e2)};
}

cplx bath_correlation(double t, const std::vector<cplx>& eta_k, const std::vector<double>& omega_k) {
  if (eta_k.size() != omega_k.size()) throw std::invalid_argument("bath_correlation: table size mismatch");
  cplx g = 0.0;
  for (std::size_t i = 0; i < eta_k.size(); ++i) g += std::norm(eta_k[i]) * std::polar(1.0, omega_k[i] * t);
  return g;
}

CorrelationSamples sample_bath_correlation(const std::vector<cplx>& eta_k, const std::vector<double>& omega_k,
                                           double t_max, double dt) {
  if (eta_k.size() != omega_k.size()) throw std::invalid_argument("sample_bath_correlation: table size mismatch");
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw std::invalid_argument("sample_bath_correlation: bad time grid");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  const std::size_t n = eta_k.size();
  std::vector<double> weight(n);
  std::vector<cplx> step(n), phasor(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    weight[i] = std::norm(eta_k[i]);
    step[i] = std::polar(1.0, omega_k[i] * dt);
  }
  CorrelationSamples out;
  out.times.resize(steps + 1);
  out.values.resize(steps + 1);
  constexpr std::size_t resync = 1024;  // bounds the accumulated rounding of the recurrence
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    if (s > 0) {
      if (s % resync == 0)
        for (std::size_t i = 0; i < n; ++i) phasor[i] = std::polar(1.0, omega_k[i] * t);
      else
        for (std::size_t i = 0; i < n; ++i) phasor[i] *= step[i];
    }
    cplx g = 0.0;
    for (std::size_t i = 0; i < n; ++i) g += weight[i] * phasor[i];
    out.times[s] = t;
    out.values[s] = g;
  }
  return out;
}

CorrelationTime correlation_time(const CorrelationSamples& samples) {
  const std::size_t n = samples.values.size();
  if (n < 2) throw PhysicsError("correlation time: too few samples");
  const double g0 = std::abs(samples.values[0]);
  if (!(g0 > 0.0)) throw PhysicsError("correlation time: G(0) vanishes");
  const double level = std::exp(-1.0);

  // next_above[i]: first index >= i where |G|/|G0| >= 1/e (n if none)
  std::vector<std::size_t> next_above(n + 1, n);
  for (std::size_t i = n; i-- > 0;)
    next_above[i] = std::abs(samples.values[i]) / g0 >= level ? i : next_above[i + 1];

  const double t_end = samples.times.back();
  for (std::size_t i = 1; i < n; ++i) {
    const double t = samples.times[i];
    if (10.0 * t > t_end) break;
    if (next_above[i] == i) continue;
    const double until = next_above[i] < n ? samples.times[next_above[i]] : t_end + 1.0;
    if (until > 10.0 * t) return {t, 10.0 * t};
  }
  throw PhysicsError("correlation function does not stay below 1/e over any [t, 10t] window");
}

std::optional<double> first_crossing(const CorrelationSamples& samples, double level) {
  if (samples.values.empty()) return std::nullopt;
  const double g0 = std::abs(samples.values[0]);
  for (std::size_t i = 0; i < samples.values.size(); ++i)
    if (std::abs(samples.values[i]) < level * g0) return samples.times[i];
  return std::nullopt;
}

double mode_spacing_ratio(double ka, int sites) { return std::sin(ka) * constants::pi / (2.0 * sites); }

MarkovReport markov_report(const std::vector<cplx>& eta_k, const std::vector<double>& omega_k, int sites,
                           double kappa, const MarkovOptions& options) {
  MarkovReport r;
  r.representative_ka = options.representative_ka;
  r.mode_spacing = mode_spacing_ratio(options.representative_ka, sites);
  r.spacing_small = r.mode_spacing < options.spacing_limit;
  r.tau_s = kappa > 0.0 ? 1.0 / kappa : std::numeric_limits<double>::infinity();
  try {
    const auto samples = sample_bath_correlation(eta_k, omega_k, options.t_max, options.dt);
    r.first_crossing_02 = first_crossing(samples, 0.2);
    try {
      r.tau_b = correlation_time(samples).tau;
    } catch (const PhysicsError& e) {
      r.note = e.what();
    }
  } catch (const std::exception& e) {
    r.note = e.what();
  }
  // without a sustained decay the first 0.2 crossing is the only available scale
  std::optional<double> scale = r.tau_b;
  if (!scale && r.first_crossing_02) {
    scale = r.first_crossing_02;
    r.note += "; separation judged from the first 0.2 crossing";
  }
  r.time_scales_separated = scale && *scale < options.separation * r.tau_s;
  if (!r.spacing_small) r.note += "; mode spacing is not small against the bandwidth";
  if (!scale)
    r.note += "; no bath correlation time could be determined";
  else if (!r.time_scales_separated)
    r.note += "; bath correlation time is not well below 1/kappa";
  if (!r.note.empty() && r.note.rfind("; ", 0) == 0) r.note.erase(0, 2);
  r.markovian = r.spacing_small && r.time_scales_separated;
  return r;
}

}  // namespace nvmagnon
