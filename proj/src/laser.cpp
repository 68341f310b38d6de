#include "collapse/laser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "collapse/energy_gain.hpp"

namespace collapse::laser {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

double lambda_bar_sq(const units::CollapseParams& p) { return p.lambda_bar_n * p.lambda_bar_n; }

}  // namespace

LaserPulseSpec LaserPulseSpec::from_wavelength(double lambda0_cm, double sigma_cm, double n_mean0,
                                               double duration_s) {
  return {units::wavelength_to_wavenumber(lambda0_cm), sigma_cm, n_mean0, duration_s};
}

LaserPulseSpec LaserPulseSpec::from_pulse_energy(double energy_j, double lambda0_cm, double sigma_cm,
                                                 double duration_s) {
  return from_wavelength(lambda0_cm, sigma_cm, units::photons_in_pulse(energy_j, lambda0_cm),
                         duration_s);
}

double LaserPulseSpec::lambda0() const { return units::wavenumber_to_wavelength(k0); }

void LaserPulseSpec::validate() const {
  require(k0 > 0.0 && std::isfinite(k0), "pulse k0 must be positive");
  require(sigma > 0.0 && std::isfinite(sigma), "pulse sigma must be positive");
  require(n_mean0 >= 0.0 && std::isfinite(n_mean0), "mean photon number must be >= 0");
  require(duration >= 0.0, "duration must be >= 0");
  require(k0 * sigma > 100.0, "pulse needs k0 sigma > 100 (got " + std::to_string(k0 * sigma) + ")");
}

std::vector<std::string> LaserPulseSpec::warnings(const units::CollapseParams& params) const {
  std::vector<std::string> w;
  if (k0 * sigma < 1e3) w.push_back("k0 sigma = " + std::to_string(k0 * sigma) + " is below 1e3");
  if (sigma <= params.a) w.push_back("sigma does not exceed the collapse length a");
  return w;
}

std::string_view to_string(LossRegime r) {
  switch (r) {
    case LossRegime::low_k0a: return "low_k0a";
    case LossRegime::high_k0a: return "high_k0a";
    case LossRegime::exact: return "exact";
  }
  return "unknown";
}

LossRegime parse_loss_regime(std::string_view label) {
  if (label == "low_k0a" || label == "low") return LossRegime::low_k0a;
  if (label == "high_k0a" || label == "high") return LossRegime::high_k0a;
  if (label == "exact") return LossRegime::exact;
  throw std::invalid_argument("unknown loss regime '" + std::string(label) + "'");
}

quad::IntegrationResult loss_integral(double k0, double sigma, double a, const quad::Tolerance& tol) {
  require(k0 > 0.0 && sigma > 0.0 && a > 0.0, "loss_integral: arguments must be positive");
  require(k0 * sigma > 1.0, "loss_integral: needs k0 sigma >> 1");
  quad::Tolerance inner = tol;
  inner.rel = tol.rel * 0.1;
  inner.abs = 0.0;
  std::size_t inner_evals = 0;
  auto identity = [](double q) { return q; };
  // g(k1) = int d^3k2 k2 exp(-(k1 - k2)^2 a^2) depends on |k1| only.
  quad::Function3D outer = [&](const quad::Vec3& k1) {
    const double k = k1.norm();
    const auto g = quad::integrate_isotropic_kernel(identity, k, a, inner);
    inner_evals += g.evaluations;
    return k * g.value;
  };
  quad::GaussianWeight3D envelope{quad::Vec3(0, 0, k0), sigma};
  auto r = quad::integrate_gaussian_3d(outer, envelope, tol);
  const double norm = std::pow(sigma * sigma / kPi, 1.5);
  return {r.value * norm, r.error_estimate * norm, r.evaluations + inner_evals};
}

double loss_integral_low(double k0, double a) { return k0 * 2.0 * kPi / std::pow(a, 4); }

double loss_integral_high(double k0, double a) { return k0 * k0 * std::pow(kPi / (a * a), 1.5); }

PhotonLossResult mean_photons(const LaserPulseSpec& spec, const units::CollapseParams& params,
                              double t, LossRegime regime, const quad::Tolerance& tol) {
  spec.validate();
  params.validate();
  require(t >= 0.0, "mean_photons: t must be >= 0");
  PhotonLossResult out;
  out.regime = regime;
  out.k0a = spec.k0 * params.a;
  const double lb2 = lambda_bar_sq(params);
  const double lambda0 = spec.lambda0();
  switch (regime) {
    case LossRegime::low_k0a:
      out.loss_coefficient = 4.0 * std::sqrt(kPi) * spec.n_mean0 * lb2 / (lambda0 * params.a);
      break;
    case LossRegime::high_k0a:
      out.loss_coefficient = spec.n_mean0 * lb2 / (lambda0 * lambda0);
      break;
    case LossRegime::exact:
      out.loss_coefficient = spec.n_mean0 * lb2 * std::pow(params.a * params.a / kPi, 1.5) *
                             loss_integral(spec.k0, spec.sigma, params.a, tol).value;
      break;
  }
  out.loss_fraction = out.loss_coefficient * params.lambda_rate * t;
  out.n_mean_t = spec.n_mean0 * (1.0 - out.loss_fraction);
  out.first_order_valid = out.loss_fraction <= 0.5;
  return out;
}

double excitation_prefactor(const LaserPulseSpec& spec, const units::CollapseParams& params, double t) {
  require(t >= 0.0, "excitation: t must be >= 0");
  return spec.n_mean0 * params.lambda_rate * t * lambda_bar_sq(params) *
         std::pow(params.a * params.a / kPi, 1.5);
}

double excitation_density(const quad::Vec3& k, const LaserPulseSpec& spec,
                          const units::CollapseParams& params, double t) {
  const quad::Vec3 k0(0, 0, spec.k0);
  const double a2 = params.a * params.a;
  return excitation_prefactor(spec, params, t) * spec.k0 * k.norm() *
         std::exp(-(k0 - k).squaredNorm() * a2);
}

double excitation_density_radial(double k, const LaserPulseSpec& spec,
                                 const units::CollapseParams& params, double t) {
  require(k >= 0.0, "excitation_density_radial: k must be >= 0");
  return excitation_prefactor(spec, params, t) * spec.k0 * k * 0.5 *
         quad::gaussian_angular_integral(k, spec.k0, params.a);
}

double excitation_density_small_k0a(const quad::Vec3& k, const LaserPulseSpec& spec,
                                    const units::CollapseParams& params, double t) {
  return excitation_prefactor(spec, params, t) * spec.k0 * k.norm() *
         std::exp(-k.squaredNorm() * params.a * params.a);
}

std::vector<double> default_excitation_grid(double k0, double a, std::size_t points) {
  require(points >= 2, "grid needs at least two points");
  const double lo = 1e-3 / a;
  const double hi = std::max(10.0 / a, k0 + 10.0 / a);
  return quad::geometric_breakpoints(lo, hi, points - 1);
}

quad::IntegrationResult excitation_total(const LaserPulseSpec& spec, const units::CollapseParams& params,
                                         double t, const quad::Tolerance& tol) {
  const double pref = excitation_prefactor(spec, params, t);
  if (pref == 0.0) return {0.0, 0.0, 1};
  auto shell = [&](double q) { return q; };
  // int d^3k k0 k exp(-(k - k0)^2 a^2): the kernel centred at k0, integrand |k|.
  auto r = quad::integrate_isotropic_kernel(shell, spec.k0, params.a, tol);
  const double scale = pref * spec.k0;
  return {r.value * scale, r.error_estimate * scale, r.evaluations};
}

ExcitationSpectrum excitation_spectrum(const std::vector<double>& grid, const LaserPulseSpec& spec,
                                       const units::CollapseParams& params, double t,
                                       const quad::Tolerance& tol) {
  spec.validate();
  params.validate();
  require(grid.size() >= 2, "excitation grid needs at least two points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    require(grid[i] >= 0.0 && grid[i] < grid[i + 1], "excitation grid must be increasing and >= 0");
  }
  ExcitationSpectrum out;
  out.k = grid;
  out.density.resize(grid.size());
  out.cumulative_fraction.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.density[i] = excitation_density_radial(grid[i], spec, params, t);
  }
  const auto total = excitation_total(spec, params, t, tol);
  out.total = total.value;
  if (out.total == 0.0) return out;

  auto shell = [&](double k) {
    return 4.0 * kPi * k * k * excitation_density_radial(k, spec, params, t);
  };
  quad::Tolerance panel_tol = tol;
  panel_tol.abs = std::max(tol.abs, 1e-3 * tol.rel * out.total);
  double running = grid.front() > 0.0 ? quad::integrate_radial(shell, 0.0, grid.front(), panel_tol).value
                                      : 0.0;
  out.cumulative_fraction[0] = running / out.total;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    running += quad::integrate_radial(shell, grid[i - 1], grid[i], panel_tol).value;
    out.cumulative_fraction[i] = running / out.total;
  }
  const double missed_low = out.cumulative_fraction.front();
  const double missed_high = 1.0 - out.cumulative_fraction.back();
  if (missed_low + missed_high > 1e-3) {
    throw std::domain_error("excitation grid misses " + std::to_string(missed_low + missed_high) +
                            " of the spectrum; extend it over the Gaussian support");
  }
  return out;
}

double residual_bracket(double distance, double k0, double sigma) {
  const double d2s2 = distance * distance * sigma * sigma;
  return k0 * k0 *
         (std::pow(2.0, 1.5) * std::exp(-d2s2) - 2.0 * std::pow(4.0 / 3.0, 1.5) * std::exp(-d2s2 * 2.0 / 3.0));
}

double residual_bracket_integral(double k0, double sigma) {
  return -k0 * k0 * std::pow(2.0 * kPi / (sigma * sigma), 1.5);
}

double residual_R(const quad::Vec3& k, const LaserPulseSpec& spec, const units::CollapseParams& params,
                  double t) {
  const double d = (k - quad::Vec3(0, 0, spec.k0)).norm();
  return excitation_prefactor(spec, params, t) * residual_bracket(d, spec.k0, spec.sigma);
}

ExcitationRate total_excitation_rate(const LaserPulseSpec& spec, const units::CollapseParams& params,
                                     double t) {
  spec.validate();
  params.validate();
  ExcitationRate out;
  out.gamma = 4.0 * std::sqrt(kPi) * params.lambda_rate * lambda_bar_sq(params) /
              (spec.lambda0() * params.a);
  out.gamma_n0 = out.gamma * spec.n_mean0;
  out.expected_count = out.gamma_n0 * t;
  out.k0a = spec.k0 * params.a;
  out.small_k0a = out.k0a < 1.0;
  return out;
}

bool TraceCheck::within(double rel) const {
  return std::abs(residual) <= rel * std::abs(loss);
}

TraceCheck trace_check(const LaserPulseSpec& spec, const units::CollapseParams& params, double t,
                       const quad::Tolerance& tol) {
  spec.validate();
  params.validate();
  TraceCheck out;
  const double pref = excitation_prefactor(spec, params, t);
  if (pref == 0.0) return out;
  // Beam side: the kernel integral centred on k0, done in 3-d about k0.
  const double k0 = spec.k0;
  quad::GaussianWeight3D kernel{quad::Vec3(0, 0, k0), params.a};
  const auto loss = quad::integrate_gaussian_3d([k0](const quad::Vec3& k) { return k.norm() * k0; },
                                                kernel, tol);
  out.loss = pref * loss.value;
  out.excitation = excitation_total(spec, params, t, tol).value;
  out.residual = (1.0 - out.loss) + out.excitation - 1.0;
  return out;
}

EnergyBalance energy_balance_check(const LaserPulseSpec& spec, const units::CollapseParams& params,
                                   double t, const quad::Tolerance& tol) {
  spec.validate();
  params.validate();
  EnergyBalance out;
  const double pref = excitation_prefactor(spec, params, t);
  if (pref == 0.0) return out;
  const double k0 = spec.k0;
  auto weight = [k0](double q) { return q * (q - k0); };
  const auto spectral = quad::integrate_isotropic_kernel(weight, k0, params.a, tol);
  out.spectrum_path = pref * k0 * spectral.value;
  out.kernel_path = pref * energy_gain::f_exact(k0, 0.0, params.a, tol).value;
  out.mismatch = std::abs(out.spectrum_path - out.kernel_path) / std::abs(out.kernel_path);
  return out;
}

AppendixBResult appendixB_I(double k0, double sigma, double a) {
  require(k0 > 0.0 && sigma > 0.0 && a > 0.0, "appendixB_I: arguments must be positive");
  AppendixBResult out;
  out.value = k0 * k0 * std::pow(2.0 * kPi, 1.5) / std::pow(sigma, 3);
  out.sigma_over_a = sigma / a;
  out.approximation_degraded = sigma <= 2.0 * a;
  out.ratio_to_loss_term = out.value / loss_integral_low(k0, a);
  return out;
}

quad::IntegrationResult appendixB_I_oracle(double k0, double sigma, double a,
                                           const quad::MonteCarloOptions& options,
                                           bool exact_weights) {
  require(k0 > 0.0 && sigma > 0.0 && a >= 0.0, "appendixB_I_oracle: bad arguments");
  const double norm4 = std::pow(sigma * sigma / kPi, 3.0);
  quad::Function4K g;
  if (exact_weights) {
    g = [norm4](const quad::Vec3& k1, const quad::Vec3& k2, const quad::Vec3& k3, const quad::Vec3& k4) {
      return norm4 * std::sqrt(k1.norm() * k2.norm() * k3.norm() * k4.norm());
    };
  } else {
    const double w = norm4 * k0 * k0;
    g = [w](const quad::Vec3&, const quad::Vec3&, const quad::Vec3&, const quad::Vec3&) { return w; };
  }
  const quad::GaussianWeight3D e{quad::Vec3(0, 0, k0), sigma / std::numbers::sqrt2};
  return quad::integrate_constrained_4k(g, {e, e, e, e}, a, options);
}

}  // namespace collapse::laser
