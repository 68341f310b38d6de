#include <cmath>
#include <numbers>

#include "doctest.h"

#include "collapse/cosmology.hpp"

using namespace collapse;
using namespace collapse::cosmology;
using std::numbers::pi;

namespace {

CosmologyScenario defaults() { return {}; }

// Collapse length comparable to the thermal length (beta ~ 0.08 cm), so
// neither kernel can be replaced by its small-k form.
CosmologyScenario scaled(double a) {
  CosmologyScenario s;
  s.params.a = a;
  s.params.lambda_rate = 1e-3;
  s.params.lambda_bar_n = 1e-2;
  return s;
}

}  // namespace

TEST_CASE("redshift time integral") {
  auto s = defaults();
  CHECK(redshift_time_integral(s) == 501.0);
  CHECK(std::abs(redshift_time_integral(s) / 500.0 - 1.0) < 0.01);
  s.Z0 = 0.0;
  CHECK(redshift_time_integral(s) == 1.0);
  s.Z0 = 2.0;
  CHECK(redshift_time_integral(s) == 2.0);
  // Direct quadrature of 1 + Z(t) over the linear history.
  s.Z0 = 1000.0;
  const double q = quad::integrate_radial([&](double t) { return 1.0 + s.Z0 * (1.0 - t / s.t0); }, 0.0, s.t0).value;
  CHECK(q / s.t0 == doctest::Approx(redshift_time_integral(s)).epsilon(1e-12));
}

TEST_CASE("scenario validation") {
  auto s = defaults();
  CHECK_NOTHROW(s.validate());
  s.T0 = 0.0;
  CHECK_THROWS_AS(s.validate(), std::domain_error);
  s = defaults();
  s.delta = 0.0;
  CHECK_THROWS_AS(s.validate(), std::domain_error);
  CHECK(defaults().thermal_wavelength() == doctest::Approx(0.5279).epsilon(1e-3));
}

TEST_CASE("fractional loss") {
  auto s = defaults();
  s.params.lambda_rate = 1.0;
  const double l01 = fractional_loss(0.1, s);
  CHECK(std::abs(l01 / 0.6 - 1.0) < 0.1);
  const double by_hand = 4.0 * std::sqrt(pi) * std::pow(2.1e-14, 2) / (1e-5 * 0.1) * 4e17 * 501.0;
  CHECK(l01 == doctest::Approx(by_hand).epsilon(1e-12));
  CHECK(l01 / fractional_loss(1.0, s) == doctest::Approx(10.0).epsilon(1e-14));
  for (double l : {0.07, 0.3, 2.0, 30.0})
    CHECK(fractional_loss(l, s) * l == doctest::Approx(l01 * 0.1).epsilon(1e-13));
}

TEST_CASE("distorted spectrum") {
  auto s = defaults();
  s.params.lambda_rate = 0.0;
  const auto grid = default_wavelength_grid();
  CHECK(grid.size() == 200);
  CHECK(grid.front() == doctest::Approx(0.05));
  CHECK(grid.back() == doctest::Approx(50.0));
  for (const auto& pt : distorted_spectrum(grid, s)) {
    CHECK(pt.distorted_occupancy == pt.planck_occupancy);
    CHECK(pt.planck_occupancy > 0.0);
  }
  const double nu = units::kSpeedOfLight / 0.2;
  const double x = units::kPlanck * nu / (units::kBoltzmann * s.T0);
  CHECK(planck_occupancy(nu, s.T0) ==
        doctest::Approx(8.0 * pi * nu * nu / (std::pow(units::kSpeedOfLight, 3) * (std::exp(x) - 1.0))).epsilon(1e-13));

  s.params.lambda_rate = 1.0;
  const auto p01 = spectrum_point(0.1, s);
  CHECK_FALSE(p01.kernel_approx_valid);
  CHECK(spectrum_point(1.0, s).kernel_approx_valid);
  CHECK(p01.first_order_valid);
  s.params.lambda_rate = 2.0;
  CHECK_FALSE(spectrum_point(0.05, s).first_order_valid);
}

TEST_CASE("Bose integral") {
  CHECK(bose_integral(1.0) == doctest::Approx(4.0 * pi * 6.0 * std::pow(pi, 4) / 90.0).epsilon(1e-14));
  CHECK(bose_integral(1.0) == doctest::Approx(81.6).epsilon(1e-3));
  CHECK(bose_integral_approx(1.0) / bose_integral(1.0) == doctest::Approx(90.0 / std::pow(pi, 4)).epsilon(1e-14));
  const double beta = 0.37;
  const double q = quad::integrate_radial([&](double k) { return 4.0 * pi * k * k * k / std::expm1(beta * k); },
                                          0.0, INFINITY)
                       .value;
  CHECK(q == doctest::Approx(bose_integral(beta)).epsilon(1e-6));
}

TEST_CASE("gain term and loss/gain ratio") {
  auto s = defaults();
  const auto g = gain_term(0.1, s, s.t0);
  CHECK(g.loss_gain_ratio > 1e14);
  CHECK(g.loss_gain_ratio < 1e15);
  CHECK(g.loss_gain_ratio_occupied < g.loss_gain_ratio);
  // The coefficient ratio equals the ratio of the two terms once the
  // occupation factor is restored.
  CHECK(g.loss / g.gain == doctest::Approx(g.loss_gain_ratio_occupied).epsilon(1e-12));
  CHECK(g.loss_coefficient / g.gain == doctest::Approx(g.loss_gain_ratio).epsilon(1e-12));
  auto s2 = s;
  s2.params.a *= 2.0;
  CHECK(g.loss_gain_ratio / gain_term(0.1, s2, s.t0).loss_gain_ratio == doctest::Approx(16.0).epsilon(1e-12));
  s.params.lambda_rate = 0.0;
  CHECK(gain_term(0.1, s, 1.0).gain == 0.0);
  // Loss dominance over the stated band.
  s = defaults();
  for (double l : default_wavelength_grid(50)) {
    const auto gl = gain_term(l, s, s.t0);
    CHECK(gl.gain / gl.loss_coefficient <= 1e-13);
  }
}

TEST_CASE("temperature degeneracy") {
  const auto s = defaults();
  const auto one = temperature_degeneracy(1.0, s);
  CHECK(one.regime == DegeneracyRegime::long_wavelength);
  CHECK(one.has_bound);
  CHECK(std::abs(one.lambda_bound / 3e-3 - 1.0) < 0.15);
  CHECK(one.lambda_bound == doctest::Approx(2e-4 / one.loss_per_lambda).epsilon(1e-14));

  const auto tenth = temperature_degeneracy(0.1, s);
  CHECK(tenth.regime == DegeneracyRegime::short_wavelength);
  CHECK(tenth.degenerate);
  CHECK_FALSE(tenth.has_bound);
  CHECK(tenth.effective_delta_per_lambda == doctest::Approx(tenth.loss_per_lambda * 0.1 / s.thermal_wavelength()));
  CHECK(temperature_degeneracy(0.4, s).regime == DegeneracyRegime::intermediate);

  auto tight = s;
  tight.delta = 1e-12;
  CHECK(temperature_degeneracy(1.0, tight).lambda_bound < 1e-10);
  // e^x x / (e^x - 1) at x = 1
  CHECK(temperature_degeneracy(s.thermal_wavelength(), s).temperature_bracket ==
        doctest::Approx(std::exp(1.0) / (std::exp(1.0) - 1.0)).epsilon(1e-14));
}

TEST_CASE("mode evolution") {
  auto s = defaults();
  s.params.lambda_rate = 0.0;
  const double ks = 2.0 * pi / 0.3;
  const auto m0 = mode_evolution(ks, s, s.t0);
  CHECK(m0.energy == doctest::Approx(2.0 * ks / std::expm1(s.beta() * ks)).epsilon(1e-15));
  CHECK(m0.occupancy == doctest::Approx(2.0 / std::expm1(s.beta() * ks)).epsilon(1e-15));

  s = defaults();
  const auto m = mode_evolution(ks, s, 1e10);
  // Loss fraction equals the single-epoch form 4 sqrt(pi) lambda t lambdabar^2 / (a lambda_s).
  const double frac = 4.0 * std::sqrt(pi) * s.params.lambda_rate * 1e10 * std::pow(s.params.lambda_bar_n, 2) /
                      (s.params.a * 0.3);
  CHECK(m.loss / m.planck == doctest::Approx(frac).epsilon(1e-12));
  // With e^{-k^2 a^2} ~ 1 the gain reduces to the closed form times zeta(4).
  const auto g = gain_term(0.3, s, 1e10);
  CHECK(m.gain == doctest::Approx(g.gain * std::pow(pi, 4) / 90.0).epsilon(1e-6));

  // Oracle for the closed loss integral used above.
  const double a = s.params.a;
  const double q = quad::integrate_radial([&](double k) { return 4.0 * pi * k * k * k * std::exp(-k * k * a * a); },
                                          0.0, 10.0 / a)
                       .value;
  CHECK(q == doctest::Approx(2.0 * pi / std::pow(a, 4)).epsilon(1e-9));
}

TEST_CASE("photon number conservation") {
  for (double a : {0.3, 1.0, 3.0}) {
    const auto c = number_conservation(scaled(a));
    CHECK(c.loss_total > 0.0);
    CHECK(c.relative < 1e-6);
  }
  const auto real = number_conservation(defaults());
  CHECK(real.relative < 1e-6);
}

TEST_CASE("energy: mode sum equals the kernel form") {
  // The mode sum is a difference of loss and gain parts that cancel to
  // O((k a)^-2) once thermal momenta exceed 1/a, so a stays below ~ beta here.
  for (double a : {0.03, 0.1, 0.3}) {
    const auto e = energy_two_path(scaled(a));
    CHECK(e.kernel > 0.0);
    CHECK(e.relative < 1e-6);
  }
  CHECK(energy_two_path(defaults()).relative < 1e-6);
}
