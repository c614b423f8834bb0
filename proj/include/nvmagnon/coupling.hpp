#pragma once

// Dipolar coupling between an NV qubit and the spins of the chain, the static
// dressing of the qubit, the momentum-space coefficients and the resonance
// condition gamma0 B0 = Omega(B0).

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "nvmagnon/magnonics.hpp"

namespace nvmagnon {

struct NVParams {
  double zero_field_splitting = 0.0;  ///< D (rad/s)
  double gamma_nv = 0.0;              ///< rad/(s T)
  double height = 0.0;                ///< z_NV (m)
  std::array<double, 2> positions{};  ///< x_1, x_2 (m)
  double t1 = std::numeric_limits<double>::infinity();  ///< s
  double t2 = std::numeric_limits<double>::infinity();  ///< s

  /// D/2pi = 2.87 GHz, gamma_NV/2pi = 28.02 GHz/T, z = 20 nm, x = +-L/4.
  static NVParams defaults(const StripGeometry& geometry);

  void validate(const StripGeometry& geometry) const;
};

/// Per-site coefficients for one qubit, ordered like site_positions().
struct SiteCouplings {
  double qubit_x = 0.0;
  double d = 0.0;  ///< hbar mu0 gamma_NV gamma0 / (8 pi z^3), rad/s
  std::vector<double> x;
  std::vector<double> theta;
  std::vector<double> a, b, c;
  std::vector<double> xi, zeta, eta;  // empty until rotated_site_coefficients
};

struct QubitDressing {
  double alpha = 0.0;     ///< sum_j A_ij
  double beta = 0.0;      ///< sum_j 2 B_ij
  double omega_nv = 0.0;  ///< D - gamma_NV B0
  double omega = 0.0;     ///< omega_NV - sqrt(2s) beta
  double phi = 0.0;       ///< rotation angle in (-pi/4, pi/4]
  double big_omega = 0.0; ///< sqrt(omega^2 + 8 s alpha^2)
};

using cplx = std::complex<double>;

struct KSpaceCouplings {
  std::vector<double> k;
  std::vector<cplx> xi, zeta, eta;
  std::size_t zero_index = 0;  ///< position of k = 0 in `k`
  double xi0 = 0.0, zeta0 = 0.0, eta0 = 0.0;
};

/// Everything computed for one qubit at a given bias field.
struct QubitCouplings {
  SiteCouplings site;
  QubitDressing dressing;
  KSpaceCouplings kspace;
};

/// x_j = (j - sign(j)/2) a for j = -N/2..N/2, j != 0 (N entries, ascending).
std::vector<double> site_positions(int sites, double lattice);

/// A, B, C for every site. Sites with |x_i - x_j| > cutoff get zero coefficients.
SiteCouplings dipolar_site_coefficients(double qubit_x, const NVParams& nv, const MaterialParams& material,
                                        const StripGeometry& geometry,
                                        double cutoff = std::numeric_limits<double>::infinity());

QubitDressing dress_qubit(const SiteCouplings& site, const NVParams& nv, const MaterialParams& material,
                          double bias);

/// Fills xi, zeta, eta of `site` for the rotation angle of `dressing`.
void rotated_site_coefficients(SiteCouplings& site, const QubitDressing& dressing);

/// f_k = N^{-1/2} sum_j f_ij exp(-i k x_j).
KSpaceCouplings to_k_space(const SiteCouplings& site, const std::vector<double>& k);

/// Full per-qubit pipeline at bias field B0.
QubitCouplings couple_qubit(double qubit_x, const NVParams& nv, const MaterialParams& material,
                            const StripGeometry& geometry, double bias);

struct ResonanceOptions {
  double lower = 1e-3;  ///< T
  double upper = 0.2;   ///< T
  std::optional<double> seed;
  double tolerance = 1e3 * 6.283185307179586;  ///< |g| bound, rad/s
};

struct ResonanceResult {
  double bias = 0.0;      ///< T
  double residual = 0.0;  ///< gamma0 B0 - Omega(B0), rad/s
  int iterations = 0;
};

/// Root of gamma0 B0 - Omega(B0). Throws PhysicsError without a sign change.
ResonanceResult solve_resonance(const SiteCouplings& site, const NVParams& nv, const MaterialParams& material,
                                const ResonanceOptions& options = {});

ResonanceResult solve_resonance(const NVParams& nv, const MaterialParams& material,
                                const StripGeometry& geometry, double qubit_x,
                                const ResonanceOptions& options = {});

}  // namespace nvmagnon
