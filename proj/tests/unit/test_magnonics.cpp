#include <doctest.h>

#include <cmath>
#include <vector>

#include "nvmagnon/constants.hpp"
#include "nvmagnon/errors.hpp"
#include "nvmagnon/magnonics.hpp"

using namespace nvmagnon;
using doctest::Approx;

namespace {
const double pi = constants::pi;
}

TEST_SUITE("magnonics") {
  TEST_CASE("chain dispersion at zone centre, middle and edge") {
    const auto m = MaterialParams::yig();
    const double b0 = 0.05116;
    const double w0 = m.gamma0 * b0;
    const double js = m.exchange * m.spin;
    CHECK(chain_dispersion(0.0, m, b0) == w0);
    CHECK(chain_dispersion(pi / m.lattice, m, b0) == Approx(w0 + 8 * js).epsilon(1e-14));
    CHECK(chain_dispersion(pi / (2 * m.lattice), m, b0) == Approx(w0 + 4 * js).epsilon(1e-14));
    // mpmath reference
    CHECK(chain_dispersion(pi / (2 * m.lattice), m, b0) == Approx(11936101174709.528).epsilon(1e-13));
    CHECK_THROWS_AS(chain_dispersion(1.01 * pi / m.lattice, m, b0), std::domain_error);
  }

  TEST_CASE("chain dispersion long-wavelength limit") {
    const auto m = MaterialParams::yig();
    const double b0 = 0.05;
    const double w0 = m.gamma0 * b0;
    const double js = m.exchange * m.spin;
    for (double ka : {1e-4, 1e-3, 5e-3, 9.9e-3}) {
      const double k = ka / m.lattice;
      const double w = chain_dispersion(k, m, b0);
      const double quad = w0 + 2 * js * m.lattice * m.lattice * k * k;
      CHECK(std::abs(w - quad) / w < 1e-4);
    }
  }

  TEST_CASE("electrical length") {
    const auto m = MaterialParams::yig();
    CHECK(electrical_length(0.0, m) == 0.0);
    const double e = 0.123e9;
    CHECK(electrical_length(2 * e, m) == Approx(2 * electrical_length(e, m)).epsilon(1e-15));
    // mpmath reference for 0.157241 V/nm
    const double le = electrical_length(0.157241e9, m);
    CHECK(le == Approx(5.0258286584149544e-9).epsilon(1e-12));
    CHECK(le > 0.0);
    CHECK(le < StripGeometry::defaults().thickness);
    CHECK(electric_field_for_length(le, m) == Approx(0.157241e9).epsilon(1e-14));
    CHECK_THROWS(electrical_length(-1.0, m));
  }

  TEST_CASE("thin-film form factor is smooth across the series switch") {
    const double below = thin_film_form_factor(0.99999e-4);
    const double above = thin_film_form_factor(1.00001e-4);
    CHECK(above > below);
    CHECK(std::abs(above - below) < 1e-8);
    CHECK(thin_film_form_factor(0.0) == 0.0);
    CHECK(thin_film_form_factor(1e-6) == Approx(0.5e-6).epsilon(1e-6));
    CHECK(thin_film_form_factor(50.0) == Approx(1.0 - 1.0 / 50.0).epsilon(1e-12));
  }

  TEST_CASE("strip dispersion") {
    const auto m = MaterialParams::yig();
    const auto g = StripGeometry::defaults();
    FieldConfig f{0.05116, 0.0, 0.0};
    CHECK(strip_dispersion(0.0, 0, m, g, f) == Approx(m.gamma0 * f.bias).epsilon(1e-15));
    // mpmath reference
    CHECK(strip_dispersion(1e6, 0, m, g, f) == Approx(9167849420.0899795).epsilon(1e-13));

    f.electric = 0.1e9;
    const double ve = m.omega_m * electrical_length(f.electric, m);
    for (double k : {1e5, 1e6, 1e7}) {
      const double d = strip_dispersion(k, 0, m, g, f) - strip_dispersion(-k, 0, m, g, f);
      CHECK(d == Approx(-2 * ve * k).epsilon(1e-9));
    }
    // transverse modes sit above the lowest one
    f.electric = 0.0;
    CHECK(strip_dispersion(0.0, 1, m, g, f) > strip_dispersion(0.0, 0, m, g, f));
    CHECK_THROWS_AS(strip_dispersion(4.0 / m.lattice, 0, m, g, f), std::domain_error);
  }

  TEST_CASE("dispersion minimum and lower bound") {
    const auto m = MaterialParams::yig();
    const auto g = StripGeometry::defaults();
    FieldConfig f{0.05116, 0.0, 0.0};
    const auto k = k_grid(g.sites, m.lattice);
    const double w0 = m.gamma0 * f.bias;
    double wmin = 1e300;
    double kmin = 1.0;
    for (double kk : k) {
      const double w = strip_dispersion(kk, 0, m, g, f);
      if (w < wmin) {
        wmin = w;
        kmin = kk;
      }
    }
    CHECK(kmin == 0.0);
    f.electric = 0.157241e9;
    const double ve = m.omega_m * electrical_length(f.electric, m);
    for (double kk : k) CHECK(strip_dispersion(kk, 0, m, g, f) >= w0 - std::abs(ve * kk) - 1e-6 * w0);
  }

  TEST_CASE("band-edge group velocity equals -v_E") {
    const auto m = MaterialParams::yig();
    const auto g = StripGeometry::defaults();
    FieldConfig f{0.05116, 0.0, 0.157241e9};
    const double ve = m.omega_m * electrical_length(f.electric, m);
    // central difference: the |k| term is even, so only -v_E k survives
    const double h = 1e2;
    const double slope = (strip_dispersion(h, 0, m, g, f) - strip_dispersion(-h, 0, m, g, f)) / (2 * h);
    CHECK(std::abs(slope + ve) / ve < 1e-6);
  }

  TEST_CASE("band-edge DOS") {
    const auto m = MaterialParams::yig();
    auto g = StripGeometry::defaults();
    FieldConfig f{0.05116, 0.0, 0.0};
    const double d0 = strip_dos_band_edge(m, g, f);
    CHECK(d0 == Approx(1.6051651874208964e-8).epsilon(1e-12));
    CHECK(d0 > 1e-9);
    CHECK(d0 < 1e-7);
    auto g2 = g;
    g2.length *= 2;
    CHECK(strip_dos_band_edge(m, g2, f) == Approx(2 * d0).epsilon(1e-15));

    const double e = electric_field_for_band_edge_dos(0.25, m, g);
    f.electric = e;
    CHECK(strip_dos_band_edge(m, g, f) == Approx(0.25).epsilon(1e-6));
    CHECK(e == Approx(625731598.0751301).epsilon(1e-12));

    f.electric = electric_field_for_length(g.thickness * 1.01, m);
    CHECK_THROWS_AS(strip_dos_band_edge(m, g, f), PhysicsError);
  }

  TEST_CASE("finite-difference DOS near the band edge") {
    // 4 L_x/(2 pi) sum_branches |dk/domega| approaches (2/pi) D0 at E = 0
    const auto m = MaterialParams::yig();
    const auto g = StripGeometry::defaults();
    FieldConfig f{0.05116, 0.0, 0.0};
    const double k = 1e3, h = 1.0;
    double dos = 0.0;
    for (double sgn : {1.0, -1.0}) {
      const double slope =
          (strip_dispersion(sgn * (k + h), 0, m, g, f) - strip_dispersion(sgn * (k - h), 0, m, g, f)) / (2 * h);
      dos += 4 * g.length / (2 * pi) / std::abs(slope);
    }
    const double d0 = strip_dos_band_edge(m, g, f);
    CHECK(dos / d0 == Approx(2.0 / pi).epsilon(1e-3));
  }

  TEST_CASE("chain DOS") {
    const auto m = MaterialParams::yig();
    const double b0 = 0.05116;
    const int n = 1000;
    const double w0 = m.gamma0 * b0;
    const double js = m.exchange * m.spin;
    CHECK(chain_dos(w0 + 4 * js, m, b0, n) == Approx(4.0 * (n - 1) / (4 * js)).epsilon(1e-14));
    for (double frac : {1e-3, 1e-4, 1e-6}) {
      const double w = w0 + frac * 8 * js;
      const double r = chain_dos(w, m, b0, n, DosModel::long_wavelength) / chain_dos(w, m, b0, n);
      CHECK(std::abs(r - 1.0) < 0.01);
    }
    // log-log slope near the bottom of the band
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
      const double dw = 8 * js * 1e-9 * std::pow(10.0, i * 0.2);
      x.push_back(std::log(dw));
      y.push_back(std::log(chain_dos(w0 + dw, m, b0, n)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i] / x.size();
      my += y[i] / y.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    CHECK(sxy / sxx == Approx(-0.5).epsilon(0.02));
    CHECK_THROWS_AS(chain_dos(w0, m, b0, n), std::domain_error);
    CHECK_THROWS_AS(chain_dos(w0 + 8 * js + 1.0, m, b0, n), std::domain_error);
  }

  TEST_CASE("thermal occupation") {
    CHECK(thermal_occupation(1e10, 0.0) == 0.0);
    const double t = 0.3;
    const double w = std::log(2.0) * constants::boltzmann * t / constants::hbar;
    CHECK(thermal_occupation(w, t) == Approx(1.0).epsilon(1e-14));
    const double n = thermal_occupation(constants::two_pi * 1.4335e9, 1e-3);
    CHECK(n < 1e-25);
    CHECK(n == Approx(1.3236636378413964e-30).epsilon(1e-9));
  }

  TEST_CASE("upper-level temperature bound") {
    const double w = constants::two_pi * 2.87e9 + constants::two_pi * 28.02e9 * 0.0511601;
    const double t = occupation_temperature_bound(w, 0.1);
    CHECK(t == Approx(0.08613208255).epsilon(1e-9));
    CHECK(thermal_occupation(w, t) == Approx(0.1).epsilon(1e-12));
  }

  TEST_CASE("k grid") {
    const auto k = k_grid(8, 1.0);
    REQUIRE(k.size() == 8);
    CHECK(k.front() == Approx(-pi));
    CHECK(k[4] == 0.0);
    CHECK(k.back() == Approx(2 * pi * 3 / 8));
    CHECK_THROWS_AS(k_grid(7, 1.0), ValidationError);
  }

  TEST_CASE("parameter validation") {
    auto m = MaterialParams::yig();
    CHECK_NOTHROW(m.validate());
    m.spin = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);

    const auto s = MaterialParams::from_stiffness(3.7e-12, 14.2, 12.376e-10, 0.175 / constants::mu0,
                                                  19 * constants::elementary_charge, constants::two_pi * 28.02e9);
    CHECK(s.exchange * constants::hbar * s.spin * s.spin / (s.stiffness * s.lattice) == Approx(1.0).epsilon(1e-6));
    CHECK(s.omega_m == Approx(MaterialParams::yig().omega_m).epsilon(1e-12));

    const auto yig = MaterialParams::yig();
    auto g = StripGeometry::defaults();
    CHECK_NOTHROW(g.validate(yig));
    g.sites = 999;
    CHECK_THROWS_AS(g.validate(yig), ValidationError);
    g = StripGeometry::defaults();
    g.length *= 1.05;
    CHECK_THROWS_AS(g.validate(yig), ValidationError);
    g = StripGeometry::defaults();
    g.thickness = 200e-9;
    CHECK_THROWS_AS(g.validate(yig), ValidationError);

    FieldConfig f{0.05, 0.6, 0.0};
    CHECK_THROWS_AS(f.validate(), ValidationError);
    f.injection = 0.5;
    CHECK_NOTHROW(f.validate());
    f.bias = 0.0;
    CHECK_THROWS_AS(f.validate(), ValidationError);
  }
}
