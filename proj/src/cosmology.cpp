#include "collapse/cosmology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "collapse/energy_gain.hpp"

namespace collapse::cosmology {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta4 = kPi * kPi * kPi * kPi / 90.0;

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

// lambda lambdabar_N^2 (a^2/pi)^{3/2}
double coupling(const units::CollapseParams& p) {
  return p.lambda_rate * p.lambda_bar_n * p.lambda_bar_n * std::pow(p.a * p.a / kPi, 1.5);
}

double bose(double beta_k) { return 1.0 / std::expm1(beta_k); }

// The thermal factor is negligible past this many thermal scales.
constexpr double kThermalCut = 800.0;

std::vector<double> thermal_breaks(double beta) {
  return {0.0, 0.1 / beta, 1.0 / beta, 3.0 / beta, 10.0 / beta, 30.0 / beta, 100.0 / beta,
          kThermalCut / beta};
}

// Thermal breakpoints refined around a kernel centred at k of width 1/a.
std::vector<double> kernel_breaks(double beta, double k, double a) {
  auto b = thermal_breaks(beta);
  const double top = b.back();
  for (double off : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
    const double x = k + off / a;
    if (x > 0.0 && x < top) b.push_back(x);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Breakpoints covering both the thermal scale and the collapse scale 1/a.
std::vector<double> wide_breaks(double beta, double a) {
  std::vector<double> b{0.0};
  const double lo = std::min(1e-3 / beta, 1e-3 / a);
  const double hi = std::max(kThermalCut / beta, 12.0 / a) + 12.0 / a;
  for (double x : quad::geometric_breakpoints(lo, hi, 60)) b.push_back(x);
  return b;
}

}  // namespace

void CosmologyScenario::validate() const {
  require(T0 > 0.0 && std::isfinite(T0), "T0 must be positive");
  require(t0 > 0.0 && std::isfinite(t0), "t0 must be positive");
  require(Z0 >= 0.0 && std::isfinite(Z0), "Z0 must be >= 0");
  require(delta > 0.0, "delta must be positive");
  params.validate();
}

double CosmologyScenario::thermal_wavelength() const { return units::thermal_wavelength(T0); }

double CosmologyScenario::beta() const { return thermal_wavelength() / (2.0 * kPi); }

double redshift_time_integral(const CosmologyScenario& s) {
  require(s.Z0 >= 0.0, "Z0 must be >= 0");
  return 1.0 + 0.5 * s.Z0;
}

double planck_occupancy(double nu_hz, double temperature_k) {
  require(nu_hz > 0.0 && temperature_k > 0.0, "planck_occupancy: arguments must be positive");
  const double c = units::kSpeedOfLight;
  const double x = units::kPlanck * nu_hz / (units::kBoltzmann * temperature_k);
  return 8.0 * kPi * nu_hz * nu_hz / (c * c * c * std::expm1(x));
}

double fractional_loss(double lambda0_cm, const CosmologyScenario& s) {
  require(lambda0_cm > 0.0, "wavelength must be positive");
  const auto& p = s.params;
  const double nu0 = units::kSpeedOfLight / lambda0_cm;
  return 4.0 * std::sqrt(kPi) * nu0 * p.lambda_bar_n * p.lambda_bar_n / (p.a * units::kSpeedOfLight) *
         p.lambda_rate * s.t0 * redshift_time_integral(s);
}

std::vector<double> default_wavelength_grid(std::size_t points) {
  require(points >= 2, "wavelength grid needs at least two points");
  return quad::geometric_breakpoints(0.05, 50.0, points - 1);
}

SpectrumPoint spectrum_point(double lambda0_cm, const CosmologyScenario& s) {
  s.validate();
  SpectrumPoint pt;
  pt.lambda0 = lambda0_cm;
  pt.nu0 = units::kSpeedOfLight / lambda0_cm;
  pt.planck_occupancy = planck_occupancy(pt.nu0, s.T0);
  pt.fractional_loss = fractional_loss(lambda0_cm, s);
  pt.distorted_occupancy = pt.planck_occupancy * (1.0 - pt.fractional_loss);
  const double k0s = 2.0 * kPi / lambda0_cm;
  pt.kernel_approx_valid = k0s * (1.0 + s.Z0) * s.params.a < 0.3;
  pt.first_order_valid = pt.fractional_loss < 1.0;
  return pt;
}

std::vector<SpectrumPoint> distorted_spectrum(const std::vector<double>& lambda0_grid,
                                              const CosmologyScenario& s) {
  std::vector<SpectrumPoint> out;
  out.reserve(lambda0_grid.size());
  for (double l : lambda0_grid) out.push_back(spectrum_point(l, s));
  return out;
}

double bose_integral(double beta) {
  require(beta > 0.0, "beta must be positive");
  return 4.0 * kPi * 6.0 * kZeta4 / std::pow(beta, 4);
}

double bose_integral_approx(double beta) {
  require(beta > 0.0, "beta must be positive");
  return 24.0 * kPi / std::pow(beta, 4);
}

GainResult gain_term(double lambda_s_cm, const CosmologyScenario& s, double t) {
  s.validate();
  require(lambda_s_cm > 0.0, "wavelength must be positive");
  require(t >= 0.0, "t must be >= 0");
  const auto& p = s.params;
  const double ks = 2.0 * kPi / lambda_s_cm;
  const double lth = s.thermal_wavelength();
  const double lb2 = p.lambda_bar_n * p.lambda_bar_n;
  GainResult g;
  g.gain = ks * 24.0 * std::pow(2.0 * kPi, 6) / std::pow(kPi, 1.5) * p.lambda_rate * t * lb2 *
           std::pow(p.a, 3) / (std::pow(lth, 4) * lambda_s_cm);
  const double n_s = bose(lth / lambda_s_cm);
  g.loss_coefficient = 2.0 * ks * 4.0 * std::sqrt(kPi) * p.lambda_rate * t * lb2 / (p.a * lambda_s_cm);
  g.loss = g.loss_coefficient * n_s;
  g.loss_gain_ratio = std::pow(lth, 4) / (192.0 * std::pow(kPi, 4) * std::pow(p.a, 4));
  g.loss_gain_ratio_occupied = g.loss_gain_ratio * n_s;
  return g;
}

std::string_view to_string(DegeneracyRegime r) {
  switch (r) {
    case DegeneracyRegime::short_wavelength: return "short_wavelength";
    case DegeneracyRegime::intermediate: return "intermediate";
    case DegeneracyRegime::long_wavelength: return "long_wavelength";
  }
  return "unknown";
}

DegeneracyVerdict temperature_degeneracy(double lambda0_cm, const CosmologyScenario& s) {
  s.validate();
  require(lambda0_cm > 0.0, "wavelength must be positive");
  DegeneracyVerdict v;
  v.x = s.thermal_wavelength() / lambda0_cm;
  v.temperature_bracket = v.x / (-std::expm1(-v.x));
  CosmologyScenario unit = s;
  unit.params.lambda_rate = 1.0;
  v.loss_per_lambda = fractional_loss(lambda0_cm, unit);
  if (v.x >= 2.0) {
    // Both brackets fall as 1/lambda0: absorbed by a temperature shift.
    v.regime = DegeneracyRegime::short_wavelength;
    v.degenerate = true;
    v.effective_delta_per_lambda = v.loss_per_lambda / v.x;
  } else if (v.x <= 0.6) {
    v.regime = DegeneracyRegime::long_wavelength;
    v.lambda_bound = s.delta / v.loss_per_lambda;
    v.has_bound = true;
  }
  return v;
}

ModeEvolution mode_evolution(double k_s, const CosmologyScenario& s, double t, const quad::Tolerance& tol) {
  s.validate();
  require(k_s > 0.0, "k_s must be positive");
  require(t >= 0.0, "t must be >= 0");
  const double beta = s.beta();
  const double a = s.params.a;
  const double ct = coupling(s.params) * t;
  ModeEvolution m;
  m.planck = 2.0 * k_s * bose(beta * k_s);
  m.loss = m.planck * ct * k_s * 2.0 * kPi / std::pow(a, 4);
  if (ct > 0.0) {
    auto integrand = [&](double k) {
      return 4.0 * kPi * k * k * k * std::exp(-k * k * a * a) * bose(beta * k);
    };
    const auto br = thermal_breaks(beta);
    const double g = quad::integrate_panels(integrand, br, tol).value;
    m.gain = 2.0 * ct * k_s * k_s * g;
  }
  m.energy = m.planck - m.loss + m.gain;
  m.occupancy = m.energy / k_s;
  return m;
}

NumberRate number_rate(double k_s, const CosmologyScenario& s, const quad::Tolerance& tol) {
  s.validate();
  require(k_s >= 0.0, "k_s must be >= 0");
  const double beta = s.beta();
  const double a = s.params.a;
  const double c2 = 2.0 * coupling(s.params);
  NumberRate r;
  if (c2 == 0.0 || k_s == 0.0) return r;
  const double n_s = bose(beta * k_s);
  auto shell = [](double q) { return q; };
  r.loss = c2 * k_s * n_s * quad::integrate_isotropic_kernel(shell, k_s, a, tol).value;
  auto in = [&](double q) {
    if (q == 0.0) return 0.0;
    return 2.0 * kPi * q * q * q * bose(beta * q) * quad::gaussian_angular_integral(k_s, q, a);
  };
  const auto br = kernel_breaks(beta, k_s, a);
  r.gain = c2 * k_s * quad::integrate_panels(in, br, tol).value;
  return r;
}

ConservationCheck number_conservation(const CosmologyScenario& s, const quad::Tolerance& tol) {
  s.validate();
  const double beta = s.beta();
  ConservationCheck c;
  quad::Tolerance inner = tol;
  inner.rel = tol.rel * 0.01;
  auto loss = [&](double k) { return k > 0.0 ? 4.0 * kPi * k * k * number_rate(k, s, inner).loss : 0.0; };
  auto gain = [&](double k) { return k > 0.0 ? 4.0 * kPi * k * k * number_rate(k, s, inner).gain : 0.0; };
  c.loss_total = quad::integrate_panels(loss, thermal_breaks(beta), tol).value;
  c.gain_total = quad::integrate_panels(gain, wide_breaks(beta, s.params.a), tol).value;
  c.relative = c.loss_total == 0.0 ? 0.0 : std::abs(c.gain_total - c.loss_total) / c.loss_total;
  return c;
}

EnergyCheck energy_two_path(const CosmologyScenario& s, const quad::Tolerance& tol) {
  s.validate();
  const double beta = s.beta();
  const double a = s.params.a;
  EnergyCheck e;
  quad::Tolerance inner = tol;
  inner.rel = tol.rel * 0.01;
  auto loss = [&](double k) { return k > 0.0 ? 4.0 * kPi * k * k * k * number_rate(k, s, inner).loss : 0.0; };
  auto gain = [&](double k) { return k > 0.0 ? 4.0 * kPi * k * k * k * number_rate(k, s, inner).gain : 0.0; };
  const double lost = quad::integrate_panels(loss, thermal_breaks(beta), tol).value;
  const double gained = quad::integrate_panels(gain, wide_breaks(beta, a), tol).value;
  e.mode_sum = gained - lost;

  const double c2 = 2.0 * coupling(s.params);
  auto f = [&](double q) {
    if (q == 0.0) return 0.0;
    return 4.0 * kPi * q * q * bose(beta * q) * energy_gain::f_exact(q, 0.0, a, inner).value;
  };
  e.kernel = c2 * quad::integrate_panels(f, thermal_breaks(beta), tol).value;
  e.relative = e.kernel == 0.0 ? 0.0 : std::abs(e.mode_sum - e.kernel) / std::abs(e.kernel);
  return e;
}

}  // namespace collapse::cosmology
