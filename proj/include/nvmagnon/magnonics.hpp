#pragma once

// Magnon dispersion, density of states and thermal occupation for the
// nearest-neighbour spin chain and the finite YIG strip.
//
// Units: SI throughout, frequencies are angular (rad/s).

#include <vector>

namespace nvmagnon {

/// Material constants of the magnetic strip.
struct MaterialParams {
  double exchange = 0.0;        ///< J, exchange frequency (rad/s)
  double spin = 0.0;            ///< s, effective spin per cubic cell
  double lattice = 0.0;         ///< a (m)
  double omega_m = 0.0;         ///< gamma0 * mu0 * Ms (rad/s)
  double stiffness = 0.0;       ///< A_ex (J/m)
  double spin_orbit = 0.0;      ///< E_SO (J)
  double gamma0 = 0.0;          ///< gyromagnetic ratio (rad/(s T))
  double g_factor = 2.0;
  double magnetization = 0.0;   ///< Ms (A/m)

  /// Table of YIG values used throughout (J/2pi = 33.42 GHz, s = 14.2,
  /// a = 12.376 A, mu0 Ms = 175 mT, A = 3.7 pJ/m, E_SO = 19 eV,
  /// gamma0/2pi = 28.02 GHz/T).
  static MaterialParams yig();

  /// Builds the parameter set with J derived from the exchange stiffness,
  /// J = A a / (hbar s^2), and omega_M = gamma0 mu0 Ms.
  static MaterialParams from_stiffness(double stiffness, double spin, double lattice,
                                       double magnetization, double spin_orbit,
                                       double gamma0, double g_factor = 2.0);

  void validate() const;
};

struct StripGeometry {
  int sites = 0;          ///< N, even
  double length = 0.0;    ///< L_x (m)
  double width = 0.0;     ///< L_y (m)
  double thickness = 0.0; ///< L_z (m)
  int transverse_mode = 0;

  /// N = 1000, L_x = (N-1)a = 1.236 um, L_y = 120 nm, L_z = 20 nm.
  static StripGeometry defaults();

  void validate(const MaterialParams& material) const;
};

struct FieldConfig {
  double bias = 0.0;      ///< B0 along z (T)
  double injection = 0.0; ///< B1 along -y (T)
  double electric = 0.0;  ///< transverse E (V/m)

  static constexpr double saturation_field = 0.5; // T

  void validate() const;
};

enum class DosModel { exact, long_wavelength };

/// omega_0 = gamma0 * B0.
double band_bottom(const MaterialParams& material, double bias);

/// Chain dispersion omega_0 + 4 J s (1 - cos k a). Throws std::domain_error
/// outside the first Brillouin zone.
double chain_dispersion(double k, const MaterialParams& material, double bias);

/// L_E = 4 gamma0 A |e| E / (omega_M Ms E_SO).
double electrical_length(double electric_field, const MaterialParams& material);

/// Inverse of electrical_length.
double electric_field_for_length(double length, const MaterialParams& material);

/// 1 - (1 - exp(-x)) / x, with a Taylor series below |x| < 1e-4.
double thin_film_form_factor(double x);

/// Finite-strip dispersion sqrt(omega_a omega_b) - v_E k for transverse mode n_y.
double strip_dispersion(double k, int transverse_mode, const MaterialParams& material,
                        const StripGeometry& geometry, const FieldConfig& fields);

/// Band-edge DOS D0 = 8 L_x / (omega_M (L_z - L_E)) in seconds. Throws
/// PhysicsError when L_E >= L_z.
double strip_dos_band_edge(const MaterialParams& material, const StripGeometry& geometry,
                           const FieldConfig& fields);

/// Electric field that tunes the band-edge DOS to `dos` (s).
double electric_field_for_band_edge_dos(double dos, const MaterialParams& material,
                                        const StripGeometry& geometry);

/// Chain DOS in seconds (length L = (N-1)a folded in). Throws
/// std::domain_error outside (omega_0, omega_0 + 8 J s).
double chain_dos(double omega, const MaterialParams& material, double bias, int sites,
                 DosModel model = DosModel::exact);

/// Bose-Einstein occupation; exactly zero at T = 0.
double thermal_occupation(double omega, double temperature);

/// Temperature below which a mode at `omega` has occupation < max_occupation.
double occupation_temperature_bound(double omega, double max_occupation);

/// Discrete wavenumbers k_m = 2 pi m / (N a), m = -N/2 .. N/2-1.
std::vector<double> k_grid(int sites, double lattice);

/// Strip dispersion evaluated on every k of a grid.
std::vector<double> strip_dispersion_table(const std::vector<double>& k, const MaterialParams& material,
                                           const StripGeometry& geometry, const FieldConfig& fields);

}  // namespace nvmagnon
