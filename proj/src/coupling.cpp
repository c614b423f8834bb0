#include "nvmagnon/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "nvmagnon/constants.hpp"
#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace c = constants;

NVParams NVParams::defaults(const StripGeometry& geometry) {
  NVParams nv;
  nv.zero_field_splitting = c::two_pi * 2.87e9;
  nv.gamma_nv = c::two_pi * 28.02e9;
  nv.height = 20e-9;
  nv.positions = {geometry.length / 4.0, -geometry.length / 4.0};
  return nv;
}

void NVParams::validate(const StripGeometry& geometry) const {
  if (!(zero_field_splitting > 0.0)) throw ValidationError("nv.D", "must be positive");
  if (!(gamma_nv > 0.0)) throw ValidationError("nv.gamma_NV", "must be positive");
  if (!(height > 0.0)) throw ValidationError("nv.z_NV", "must be positive");
  for (double x : positions)
    if (std::abs(x) > geometry.length / 2.0 * (1.0 + 1e-12))
      throw ValidationError("nv.x_positions", "qubit lies outside the strip");
  if (!(t1 > 0.0)) throw ValidationError("nv.T1", "must be positive");
  if (!(t2 > 0.0)) throw ValidationError("nv.T2", "must be positive");
}

std::vector<double> site_positions(int sites, double lattice) {
  if (sites < 2 || sites % 2 != 0) throw ValidationError("geometry.N", "must be an even integer >= 2");
  std::vector<double> x;
  x.reserve(sites);
  for (int j = -sites / 2; j <= sites / 2; ++j) {
    if (j == 0) continue;
    const double sign = j > 0 ? 1.0 : -1.0;
    x.push_back((j - 0.5 * sign) * lattice);
  }
  return x;
}

SiteCouplings dipolar_site_coefficients(double qubit_x, const NVParams& nv, const MaterialParams& material,
                                        const StripGeometry& geometry, double cutoff) {
  if (!(nv.height > 0.0)) throw ValidationError("nv.z_NV", "must be positive");
  SiteCouplings out;
  out.qubit_x = qubit_x;
  out.x = site_positions(geometry.sites, material.lattice);
  const double z = nv.height;
  out.d = c::hbar * c::mu0 * nv.gamma_nv * material.gamma0 / (8.0 * c::pi * z * z * z);

  const std::size_t n = out.x.size();
  out.theta.resize(n);
  out.a.assign(n, 0.0);
  out.b.assign(n, 0.0);
  out.c.assign(n, 0.0);
  const double r = std::sqrt(2.0 * material.spin);
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = qubit_x - out.x[j];
    const double th = std::atan2(z, dx);  // z > 0 keeps this in (0, pi)
    out.theta[j] = th;
    if (std::abs(dx) > cutoff) continue;
    const double s = std::sin(th), cs = std::cos(th);
    const double s3 = s * s * s;
    out.a[j] = -out.d * (3.0 * r / 4.0) * s3 * std::sin(2.0 * th);
    out.b[j] = -out.d * (r / 2.0) * s3 * (3.0 * cs * cs - 2.0);
    out.c[j] = -out.d * (3.0 * r / 2.0) * s3 * cs * cs;
  }
  return out;
}

QubitDressing dress_qubit(const SiteCouplings& site, const NVParams& nv, const MaterialParams& material,
                          double bias) {
  QubitDressing q;
  for (double v : site.a) q.alpha += v;
  for (double v : site.b) q.beta += 2.0 * v;
  const double r = std::sqrt(2.0 * material.spin);
  q.omega_nv = nv.zero_field_splitting - nv.gamma_nv * bias;
  q.omega = q.omega_nv - r * q.beta;
  const double num = 2.0 * r * q.alpha;
  const double den = r * q.beta - q.omega_nv;
  // tan(2 phi) = num / den on its principal branch, so phi -> 0 as alpha -> 0
  if (den == 0.0)
    q.phi = num == 0.0 ? 0.0 : c::pi / 4.0;
  else
    q.phi = 0.5 * std::atan(num / den);
  q.big_omega = std::hypot(q.omega, std::sqrt(8.0 * material.spin) * q.alpha);
  return q;
}

void rotated_site_coefficients(SiteCouplings& site, const QubitDressing& dressing) {
  const double c2 = std::cos(2.0 * dressing.phi), s2 = std::sin(2.0 * dressing.phi);
  const std::size_t n = site.a.size();
  site.xi.resize(n);
  site.zeta.resize(n);
  site.eta.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = site.a[j], b = site.b[j], cc = site.c[j];
    const double common = -a * s2 + 0.5 * (b + cc) * c2;
    site.xi[j] = a * c2 + 0.5 * (b + cc) * s2;
    site.zeta[j] = common + 0.5 * (b - cc);
    site.eta[j] = common - 0.5 * (b - cc);
  }
}

KSpaceCouplings to_k_space(const SiteCouplings& site, const std::vector<double>& k) {
  if (site.xi.size() != site.x.size())
    throw std::logic_error("to_k_space: rotated coefficients have not been computed");
  KSpaceCouplings out;
  out.k = k;
  const std::size_t nk = k.size(), nx = site.x.size();
  out.xi.assign(nk, 0.0);
  out.zeta.assign(nk, 0.0);
  out.eta.assign(nk, 0.0);
  const double norm = 1.0 / std::sqrt(static_cast<double>(nx));
  for (std::size_t m = 0; m < nk; ++m) {
    cplx sx = 0.0, sz = 0.0, se = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
      const double ph = -k[m] * site.x[j];
      const cplx e(std::cos(ph), std::sin(ph));
      sx += site.xi[j] * e;
      sz += site.zeta[j] * e;
      se += site.eta[j] * e;
    }
    out.xi[m] = sx * norm;
    out.zeta[m] = sz * norm;
    out.eta[m] = se * norm;
    if (k[m] == 0.0) out.zero_index = m;
  }
  out.xi0 = out.xi[out.zero_index].real();
  out.zeta0 = out.zeta[out.zero_index].real();
  out.eta0 = out.eta[out.zero_index].real();
  return out;
}

QubitCouplings couple_qubit(double qubit_x, const NVParams& nv, const MaterialParams& material,
                            const StripGeometry& geometry, double bias) {
  QubitCouplings q;
  q.site = dipolar_site_coefficients(qubit_x, nv, material, geometry);
  q.dressing = dress_qubit(q.site, nv, material, bias);
  rotated_site_coefficients(q.site, q.dressing);
  q.kspace = to_k_space(q.site, k_grid(geometry.sites, material.lattice));
  return q;
}

ResonanceResult solve_resonance(const SiteCouplings& site, const NVParams& nv, const MaterialParams& material,
                                const ResonanceOptions& options) {
  auto g = [&](double b0) {
    return material.gamma0 * b0 - dress_qubit(site, nv, material, b0).big_omega;
  };
  double lo = options.lower, hi = options.upper;
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("resonance.bracket", "needs 0 < lower < upper");
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return {lo, 0.0, 0};
  if (ghi == 0.0) return {hi, 0.0, 0};
  if ((glo > 0.0) == (ghi > 0.0))
    throw PhysicsError("no resonance: gamma0 B0 - Omega(B0) keeps one sign on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "] T");

  ResonanceResult res;
  if (options.seed && *options.seed > lo && *options.seed < hi) {
    const double gs = g(*options.seed);
    if (gs == 0.0) return {*options.seed, 0.0, 1};
    if ((gs > 0.0) == (glo > 0.0)) {
      lo = *options.seed;
      glo = gs;
    } else {
      hi = *options.seed;
      ghi = gs;
    }
    ++res.iterations;
  }

  // bisection down to a few ulps, so every seed lands on the same root
  while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi && res.iterations < 400) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    ++res.iterations;
    if (gm == 0.0) {
      lo = hi = mid;
      glo = ghi = 0.0;
      break;
    }
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }

  // secant polish, kept only while it stays inside the final bracket
  double x0 = lo, x1 = hi, g0 = glo, g1 = ghi;
  double best = std::abs(glo) < std::abs(ghi) ? lo : hi;
  double gbest = std::min(std::abs(glo), std::abs(ghi));
  for (int it = 0; it < 4 && g1 != g0; ++it) {
    const double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    if (!(x2 >= lo && x2 <= hi)) break;
    const double g2 = g(x2);
    ++res.iterations;
    if (std::abs(g2) < gbest) {
      best = x2;
      gbest = std::abs(g2);
    }
    x0 = x1;
    g0 = g1;
    x1 = x2;
    g1 = g2;
  }
  res.bias = best;
  res.residual = g(best);
  if (std::abs(res.residual) > options.tolerance)
    throw PhysicsError("resonance solve did not reach the requested tolerance");
  return res;
}

ResonanceResult solve_resonance(const NVParams& nv, const MaterialParams& material,
                                const StripGeometry& geometry, double qubit_x,
                                const ResonanceOptions& options) {
  const auto site = dipolar_site_coefficients(qubit_x, nv, material, geometry);
  return solve_resonance(site, nv, material, options);
}

}  // namespace nvmagnon
