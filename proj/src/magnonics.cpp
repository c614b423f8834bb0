#include "nvmagnon/magnonics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nvmagnon/constants.hpp"
#include "nvmagnon/errors.hpp"

namespace nvmagnon {

namespace c = constants;

MaterialParams MaterialParams::yig() {
  MaterialParams m;
  m.gamma0 = c::two_pi * 28.02e9;
  m.exchange = c::two_pi * 33.42e9;
  m.spin = 14.2;
  m.lattice = 12.376e-10;
  m.magnetization = 0.175 / c::mu0;
  m.omega_m = m.gamma0 * 0.175;
  m.stiffness = 3.7e-12;
  m.spin_orbit = 19.0 * c::elementary_charge;
  m.g_factor = 2.0;
  return m;
}

MaterialParams MaterialParams::from_stiffness(double stiffness, double spin, double lattice,
                                              double magnetization, double spin_orbit,
                                              double gamma0, double g_factor) {
  MaterialParams m;
  m.stiffness = stiffness;
  m.spin = spin;
  m.lattice = lattice;
  m.magnetization = magnetization;
  m.spin_orbit = spin_orbit;
  m.gamma0 = gamma0;
  m.g_factor = g_factor;
  m.exchange = stiffness * lattice / (c::hbar * spin * spin);
  m.omega_m = gamma0 * c::mu0 * magnetization;
  m.validate();
  return m;
}

void MaterialParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(name, "must be positive and finite");
  };
  positive(exchange, "material.J");
  positive(spin, "material.s");
  positive(lattice, "material.a");
  positive(omega_m, "material.omega_M");
  positive(spin_orbit, "material.E_SO");
  positive(gamma0, "material.gamma0");
  if (stiffness < 0.0) throw ValidationError("material.A_ex", "must be non-negative");
  if (magnetization <= 0.0) throw ValidationError("material.M_s", "must be positive");
}

StripGeometry StripGeometry::defaults() {
  StripGeometry g;
  g.sites = 1000;
  g.length = 999 * 12.376e-10;
  g.width = 120e-9;
  g.thickness = 20e-9;
  return g;
}

void StripGeometry::validate(const MaterialParams& material) const {
  if (sites < 2 || sites % 2 != 0) throw ValidationError("geometry.N", "must be an even integer >= 2");
  if (transverse_mode < 0) throw ValidationError("geometry.n_y", "must be non-negative");
  if (!(thickness > 0.0)) throw ValidationError("geometry.L_z", "must be positive");
  if (!(thickness < width)) throw ValidationError("geometry.L_z", "must be smaller than L_y");
  if (!(width < length)) throw ValidationError("geometry.L_y", "must be smaller than L_x");
  const double expected = (sites - 1) * material.lattice;
  if (std::abs(length - expected) > 0.01 * expected)
    throw ValidationError("geometry.L_x", "must equal (N-1)a within 1% (expected " +
                                              std::to_string(expected) + " m)");
}

void FieldConfig::validate() const {
  if (!(bias > 0.0)) throw ValidationError("fields.B0", "must be positive");
  if (injection < 0.0) throw ValidationError("fields.B1", "must be non-negative");
  if (injection > saturation_field)
    throw ValidationError("fields.B1", "exceeds the 0.5 T saturation bound");
  if (electric < 0.0) throw ValidationError("fields.E", "must be non-negative");
}

double band_bottom(const MaterialParams& material, double bias) { return material.gamma0 * bias; }

static void check_zone(double k, double lattice) {
  // small slack so that the zone boundary itself is accepted after k*a round-off
  if (std::abs(k) * lattice > c::pi * (1.0 + 1e-12))
    throw std::domain_error("wavenumber outside the first Brillouin zone");
}

double chain_dispersion(double k, const MaterialParams& material, double bias) {
  check_zone(k, material.lattice);
  const double js = material.exchange * material.spin;
  return band_bottom(material, bias) + 4.0 * js * (1.0 - std::cos(k * material.lattice));
}

static double length_per_field(const MaterialParams& m) {
  return 4.0 * m.gamma0 * m.stiffness * c::elementary_charge /
         (m.omega_m * m.magnetization * m.spin_orbit);
}

double electrical_length(double electric_field, const MaterialParams& material) {
  if (electric_field < 0.0) throw std::domain_error("electric field must be non-negative");
  return length_per_field(material) * electric_field;
}

double electric_field_for_length(double length, const MaterialParams& material) {
  if (length < 0.0) throw std::domain_error("electrical length must be non-negative");
  return length / length_per_field(material);
}

double thin_film_form_factor(double x) {
  x = std::abs(x);
  if (x < 1e-4) return x / 2.0 - x * x / 6.0 + x * x * x / 24.0 - x * x * x * x / 120.0;
  return 1.0 - (1.0 - std::exp(-x)) / x;
}

double strip_dispersion(double k, int transverse_mode, const MaterialParams& material,
                        const StripGeometry& geometry, const FieldConfig& fields) {
  check_zone(k, material.lattice);
  double ky = 0.0;
  if (transverse_mode > 0) ky = transverse_mode * c::pi / geometry.width;
  const double kn2 = k * k + ky * ky;
  const double kn = std::sqrt(kn2);
  const double js = material.exchange * material.spin;
  const double wa = band_bottom(material, fields.bias) + 2.0 * js * material.lattice * material.lattice * kn2;
  const double wb = wa + material.omega_m * thin_film_form_factor(kn * geometry.thickness);
  const double ve = material.omega_m * electrical_length(fields.electric, material);
  return std::sqrt(wa * wb) - ve * k;
}

double strip_dos_band_edge(const MaterialParams& material, const StripGeometry& geometry,
                           const FieldConfig& fields) {
  const double le = electrical_length(fields.electric, material);
  const double eff = geometry.thickness - le;
  if (!(eff > 0.0))
    throw PhysicsError("electrical length " + std::to_string(le) +
                       " m reaches the strip thickness; band-edge DOS diverges");
  return 8.0 * geometry.length / (material.omega_m * eff);
}

double electric_field_for_band_edge_dos(double dos, const MaterialParams& material,
                                        const StripGeometry& geometry) {
  if (!(dos > 0.0)) throw ValidationError("fields.band_edge_dos", "must be positive");
  const double eff = 8.0 * geometry.length / (material.omega_m * dos);
  const double le = geometry.thickness - eff;
  if (le < 0.0)
    throw PhysicsError("requested band-edge DOS is below its zero-field value");
  return electric_field_for_length(le, material);
}

double chain_dos(double omega, const MaterialParams& material, double bias, int sites,
                 DosModel model) {
  const double w0 = band_bottom(material, bias);
  const double js = material.exchange * material.spin;
  const double dw = omega - w0;
  if (!(dw > 0.0) || !(dw < 8.0 * js)) throw std::domain_error("frequency outside the magnon band");
  if (model == DosModel::long_wavelength) return 2.0 * sites / std::sqrt(2.0 * js) / std::sqrt(dw);
  // (4/a) per unit length, times L = (N-1)a
  return 4.0 * (sites - 1) / (std::sqrt(dw) * std::sqrt(8.0 * js - dw));
}

double thermal_occupation(double omega, double temperature) {
  if (temperature < 0.0) throw std::domain_error("temperature must be non-negative");
  if (temperature == 0.0) return 0.0;
  const double x = c::hbar * omega / (c::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double occupation_temperature_bound(double omega, double max_occupation) {
  if (!(max_occupation > 0.0)) throw std::domain_error("occupation bound must be positive");
  return c::hbar * omega / (c::boltzmann * std::log1p(1.0 / max_occupation));
}

std::vector<double> k_grid(int sites, double lattice) {
  if (sites < 2 || sites % 2 != 0) throw ValidationError("geometry.N", "must be an even integer >= 2");
  std::vector<double> k(sites);
  for (int i = 0; i < sites; ++i) {
    const int m = i - sites / 2;
    k[i] = c::two_pi * m / (sites * lattice);
  }
  return k;
}

std::vector<double> strip_dispersion_table(const std::vector<double>& k, const MaterialParams& material,
                                           const StripGeometry& geometry, const FieldConfig& fields) {
  std::vector<double> w(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    w[i] = strip_dispersion(k[i], geometry.transverse_mode, material, geometry, fields);
  return w;
}

}  // namespace nvmagnon
