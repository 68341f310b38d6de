#include <cmath>
#include <numbers>

#include "doctest.h"

#include "collapse/energy_gain.hpp"

using namespace collapse;
using namespace collapse::energy_gain;
using std::numbers::pi;

namespace {

// Direct 3-d quadrature of w1 w2 (w2 - w1) about k1, with no algebraic
// rearrangement; shares nothing with f_exact except the 1-d engine.
double naive_f(double k1, double m, double a) {
  const double w1 = units::omega(k1, m);
  quad::GaussianWeight3D w{quad::Vec3(0, 0, k1), a};
  quad::Tolerance tol;
  tol.rel = 1e-7;  // the unrearranged integrand cancels strongly at large k1 a
  return quad::integrate_gaussian_3d(
             [&](const quad::Vec3& k) {
               const double w2 = std::hypot(k.norm(), m);
               return w1 * w2 * (w2 - w1);
             },
             w, tol)
      .value;
}

}  // namespace

TEST_CASE("f_exact agrees with a naive 3-d quadrature") {
  const double a = 1e-5;
  for (double k1a : {0.01, 0.6, 3.0, 20.0}) {
    for (double ma : {0.0, 1.0}) {
      const double k1 = k1a / a, m = ma / a;
      const double fast = f_exact(k1, m, a).value;
      CHECK(fast == doctest::Approx(naive_f(k1, m, a)).epsilon(1e-6));
    }
  }
}

TEST_CASE("f_exact high-ka limit for photons") {
  const double a = 1e-5;
  const double k1 = 10.0 / a;
  const double expected = k1 * std::pow(pi, 1.5) / std::pow(a, 5) * (0.75 + 0.25);
  CHECK(std::abs(f_exact(k1, 0.0, a).value / expected - 1.0) < 0.01);
  const double k20 = 20.0 / a;
  CHECK(std::abs(f_exact(k20, 0.0, a).value / f_high_ka(k20, 0.0, a) - 1.0) < 0.005);
}

TEST_CASE("f_exact low-ka photon limit") {
  const double a = 1e-5;
  const double k1 = 0.01 / a;
  CHECK(std::abs(f_exact(k1, 0.0, a).value / f_low_ka_photon(k1, a) - 1.0) < 0.02);
}

TEST_CASE("f_exact non-relativistic limit") {
  const double a = 1e-5;
  const double k1 = 0.01 / a, m = 100.0 / a;
  const double expected = (m * m / (2.0 * m)) * std::pow(pi, 1.5) / std::pow(a, 3) * 1.5 / (a * a);
  CHECK(std::abs(f_exact(k1, m, a).value / expected - 1.0) < 0.01);
  CHECK(f_nonrel(m, a) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("closed forms by substitution") {
  CHECK(f_low_ka_photon(1.0, 1.0) == doctest::Approx(1.5 * std::pow(pi, 1.5)).epsilon(1e-14));
  CHECK(f_low_ka_photon(2.0, 1.0) == doctest::Approx(3.0 * std::pow(pi, 1.5)).epsilon(1e-14));
  CHECK(f_high_ka(3.0, 0.0, 1.0) == doctest::Approx(3.0 * std::pow(pi, 1.5)).epsilon(1e-14));
  CHECK(f_high_ka(1e-6, 2.0, 1.0) == doctest::Approx(2.0 * std::pow(pi, 1.5) * 0.75).epsilon(1e-10));
}

TEST_CASE("high-ka relative error falls as (k1 a)^-2") {
  // With M = k1 the bracket carries a genuine (k1 a)^-2 correction; for
  // photons the expansion is exact up to exponentially small terms.
  const double a = 1.0;
  double err[3];
  const double ka[3] = {10.0, 20.0, 40.0};
  for (int i = 0; i < 3; ++i) {
    const double k1 = ka[i] / a;
    err[i] = std::abs(f_exact(k1, k1, a).value / f_high_ka(k1, k1, a) - 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double ratio = err[i] / err[i + 1];
    CHECK(ratio > 2.0);
    CHECK(ratio < 8.0);
  }
}

TEST_CASE("low-ka relative error shrinks monotonically") {
  const double a = 1.0;
  double prev = INFINITY;
  for (double ka : {0.1, 0.05, 0.02}) {
    const double e = std::abs(f_exact(ka, 0.0, a).value / f_low_ka_photon(ka, a) - 1.0);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("f_exact is positive") {
  for (double k : {1e-3, 0.3, 2.0, 50.0})
    for (double m : {0.0, 0.5, 10.0}) CHECK(f_exact(k, m, 1.0).value > 0.0);
}

TEST_CASE("growth laws") {
  units::CollapseParams p;
  const double t_age = 40.0 / p.lambda_rate;
  const double exponent = p.lambda_rate * t_age * std::pow(p.lambda_bar_n / p.a, 2);
  CHECK(exponent > 1e-16 / 3.0);
  CHECK(exponent < 3e-16);
  CHECK(mean_energy_growth(0.0, Regime::low_ka, p) == 0.0);
  CHECK(mean_energy_growth(5.0, Regime::low_ka, p) / mean_energy_growth(5.0, Regime::high_ka, p) ==
        doctest::Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(mean_energy_growth(1.0, Regime::exact, p), std::invalid_argument);
  CHECK_THROWS_AS(parse_regime("medium"), std::invalid_argument);
  CHECK(parse_regime("high_ka") == Regime::high_ka);
}

TEST_CASE("non-relativistic heating") {
  units::CollapseParams p;
  const double mn = p.mass_ref();
  CHECK(dHdt_nonrel(0.0, mn, p) == 0.0);
  CHECK(dHdt_nonrel(1.0, mn, p) ==
        doctest::Approx(p.lambda_rate * 3.0 / (4.0 * mn * p.a * p.a)).epsilon(1e-14));
  CHECK(dHdt_nonrel(2.0, mn, p) == doctest::Approx(2.0 * dHdt_nonrel(1.0, mn, p)).epsilon(1e-15));
  CHECK_THROWS_AS(dHdt_nonrel(1.0, 0.0, p), std::domain_error);
}

TEST_CASE("per-particle rate matches the non-relativistic law") {
  units::CollapseParams p;
  const double m = 100.0 / p.a;
  const auto r = energy_gain_rate(0.0, m, p, Regime::nonrel);
  CHECK(r.rate == doctest::Approx(dHdt_nonrel(1.0, m, p)).epsilon(1e-12));
  CHECK_FALSE(r.free_particle_only);
  CHECK(energy_gain_rate(1.0 / p.a, m, p, Regime::high_ka).free_particle_only);
  CHECK(r.rate_joule == doctest::Approx(r.rate * units::kHbarCJouleCm));
}
