#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"

#include "collapse/units.hpp"

using namespace collapse::units;

TEST_CASE("omega") {
  CHECK(omega(0.0, 5.0) == 5.0);
  CHECK(omega(3.0, 4.0) == 5.0);
  CHECK(omega(5.97e4, 0.0) == 5.97e4);
  CHECK_THROWS_AS(omega(-1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(omega(1.0, -1e-30), std::domain_error);
  double prev = 0.0;
  for (double k = 0.1; k < 1e3; k *= 1.7) {
    CHECK(omega(k, 2.0) > prev);
    CHECK(omega(k, 2.5) > omega(k, 2.0));
    prev = omega(k, 2.0);
  }
}

TEST_CASE("round trips") {
  for (double x = 1e-9; x < 1e9; x *= 13.7) {
    CHECK(wavenumber_to_wavelength(wavelength_to_wavenumber(x)) == doctest::Approx(x).epsilon(1e-12));
    CHECK(wavenumber_to_joules(joules_to_wavenumber(x * 1e-20)) == doctest::Approx(x * 1e-20).epsilon(1e-12));
    CHECK(wavenumber_to_frequency(frequency_to_wavenumber(x)) == doctest::Approx(x).epsilon(1e-12));
    CHECK(wavelength_to_kev(kev_to_wavelength(x)) == doctest::Approx(x).epsilon(1e-12));
  }
  // Wavelength -> wavenumber -> joules agrees with hc/lambda.
  const double lam = 1.053e-4;
  CHECK(wavenumber_to_joules(wavelength_to_wavenumber(lam)) == doctest::Approx(kPlanckCJouleCm / lam).epsilon(1e-12));
  CHECK(nm_to_cm(1053.0) == doctest::Approx(1.053e-4).epsilon(1e-15));
  for (auto f : {wavelength_to_wavenumber, wavenumber_to_wavelength, joules_to_wavenumber, nm_to_cm,
                 kev_to_wavelength, thermal_wavelength})
    CHECK_THROWS_AS(f(0.0), std::domain_error);
}

TEST_CASE("photons in a pulse") {
  // Exact count E lambda / (h c), then the quoted round figures.
  const double vulcan = photons_in_pulse(500.0, 1.053e-4);
  CHECK(vulcan == doctest::Approx(500.0 * 1.053e-4 / (6.62607015e-34 * 2.99792458e10)).epsilon(1e-13));
  CHECK(std::abs(vulcan / 2.5e21 - 1.0) < 0.07);

  const double lcls = photons_in_pulse(1e-3, kev_to_wavelength(8.3));
  CHECK(lcls == doctest::Approx(1e-3 / (8.3e3 * kJoulePerEv)).epsilon(1e-13));
  // About three quarters of the quoted 1e12.
  CHECK(lcls > 7e11);
  CHECK(lcls < 1e12);

  CHECK(std::abs(photons_in_pulse(1e-2, 1e-4) / 5e16 - 1.0) < 0.10);
  CHECK_THROWS_AS(photons_in_pulse(0.0, 1e-4), std::domain_error);
  CHECK_THROWS_AS(photons_in_pulse(1.0, -1e-4), std::domain_error);
}

TEST_CASE("beam segment energy") {
  CHECK(std::abs(beam_segment_energy(1e6, 300.0) / 1e-2 - 1.0) < 1e-3);
  CHECK(beam_segment_energy(1.0, kSpeedOfLight) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(beam_segment_energy(2e5, 300.0) == doctest::Approx(0.2 * beam_segment_energy(1e6, 300.0)).epsilon(1e-15));
  CHECK_THROWS_AS(beam_segment_energy(0.0, 1.0), std::domain_error);
}

TEST_CASE("constants and parameter validation") {
  PhysicalConstants c;
  CHECK_NOTHROW(c.validate());
  c.lambda_bar_n = 0.5;
  CHECK_THROWS_AS(c.validate(), std::domain_error);
  CHECK_NOTHROW(c.validate(true));
  c.lambda_bar_n = -1.0;
  CHECK_THROWS_AS(c.validate(true), std::domain_error);

  CollapseParams p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.mass_ref() == doctest::Approx(1.0 / 2.1e-14));
  p.lambda_rate = 0.0;
  CHECK_NOTHROW(p.validate());
  p.lambda_rate = -1.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p = {};
  p.a = 0.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);

  CHECK(thermal_wavelength(2.72548) == doctest::Approx(0.5279).epsilon(1e-3));
  CHECK(kHbarCErgCm == doctest::Approx(3.1615e-17).epsilon(1e-4));
}
