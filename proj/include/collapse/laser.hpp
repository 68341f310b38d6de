#pragma once

// Photon loss from a coherent pulse, the spectrum of collapse-excited
// photons, their photon-number and energy bookkeeping, and the closed-form
// four-envelope integrals that accompany them.

#include <string>
#include <string_view>
#include <vector>

#include "collapse/quadrature.hpp"
#include "collapse/units.hpp"

namespace collapse::laser {

/// Coherent pulse with envelope alpha(k) = (sigma^2/pi)^{3/4} exp(-(k - k0)^2 sigma^2 / 2).
struct LaserPulseSpec {
  double k0 = 0.0;       // cm^-1, along z
  double sigma = 0.0;    // cm
  double n_mean0 = 0.0;  // mean photon number beta^2
  double duration = 0.0; // s

  static LaserPulseSpec from_wavelength(double lambda0_cm, double sigma_cm, double n_mean0,
                                        double duration_s = 0.0);
  static LaserPulseSpec from_pulse_energy(double energy_j, double lambda0_cm, double sigma_cm,
                                          double duration_s = 0.0);

  [[nodiscard]] double lambda0() const;
  /// Throws std::domain_error if k0 sigma <= 100 or any field is invalid.
  void validate() const;
  /// Soft diagnostics: k0 sigma below 1e3, sigma not above a.
  [[nodiscard]] std::vector<std::string> warnings(const units::CollapseParams& params) const;
};

enum class LossRegime { low_k0a, high_k0a, exact };
std::string_view to_string(LossRegime r);
LossRegime parse_loss_regime(std::string_view label);

struct PhotonLossResult {
  LossRegime regime = LossRegime::exact;
  double n_mean_t = 0.0;
  /// Coefficient C in n(t) = n(0) [1 - C lambda t].
  double loss_coefficient = 0.0;
  double loss_fraction = 0.0;  // C lambda t
  double k0a = 0.0;
  bool first_order_valid = true;  // loss fraction <= 0.5
};

/// (pi/sigma^2)^{-3/2} int d^3k1 d^3k2 k1 k2 exp(-(k1-k2)^2 a^2) exp(-(k1-k0)^2 sigma^2).
quad::IntegrationResult loss_integral(double k0, double sigma, double a, const quad::Tolerance& tol = {});

/// The two closed forms of loss_integral: k0 2pi/a^4 and k0^2 (pi/a^2)^{3/2}.
double loss_integral_low(double k0, double a);
double loss_integral_high(double k0, double a);

PhotonLossResult mean_photons(const LaserPulseSpec& spec, const units::CollapseParams& params,
                              double t, LossRegime regime, const quad::Tolerance& tol = {});

/// n(0) lambda t lambdabar_N^2 (a^2/pi)^{3/2}: common prefactor of P(k) and R(k).
double excitation_prefactor(const LaserPulseSpec& spec, const units::CollapseParams& params, double t);

/// P(k) per unit d^3k at a momentum vector (pulse along z).
double excitation_density(const quad::Vec3& k, const LaserPulseSpec& spec,
                          const units::CollapseParams& params, double t);
/// P averaged over directions at |k| = k.
double excitation_density_radial(double k, const LaserPulseSpec& spec,
                                 const units::CollapseParams& params, double t);
/// Small-k0 a form with the kernel centred at the origin.
double excitation_density_small_k0a(const quad::Vec3& k, const LaserPulseSpec& spec,
                                    const units::CollapseParams& params, double t);

struct ExcitationSpectrum {
  std::vector<double> k;                    // cm^-1
  std::vector<double> density;              // direction-averaged P per d^3k
  std::vector<double> cumulative_fraction;  // share of the total below each k
  double total = 0.0;                       // int P d^3k over all k-space
};

/// 512 log-spaced points on [1e-3/a, max(10/a, k0 + 10/a)].
std::vector<double> default_excitation_grid(double k0, double a, std::size_t points = 512);

/// Spectrum on a radial grid. Throws std::domain_error if the grid misses
/// more than 1e-3 of the total.
ExcitationSpectrum excitation_spectrum(const std::vector<double>& grid, const LaserPulseSpec& spec,
                                       const units::CollapseParams& params, double t,
                                       const quad::Tolerance& tol = {});

/// int P d^3k by origin-centred radial quadrature.
quad::IntegrationResult excitation_total(const LaserPulseSpec& spec, const units::CollapseParams& params,
                                         double t, const quad::Tolerance& tol = {});

/// Residual term: prefactor * [k0^2 2^{3/2} e^{-(k-k0)^2 s^2} - 2 k0^2 (4/3)^{3/2} e^{-(k-k0)^2 2 s^2/3}].
double residual_R(const quad::Vec3& k, const LaserPulseSpec& spec, const units::CollapseParams& params,
                  double t);
/// The bracket alone as a function of |k - k0|.
double residual_bracket(double distance, double k0, double sigma);
/// int d^3k of the bracket, -k0^2 (2pi/sigma^2)^{3/2}.
double residual_bracket_integral(double k0, double sigma);

struct ExcitationRate {
  double gamma = 0.0;         // per photon per second
  double gamma_n0 = 0.0;      // photons per second from the pulse
  double expected_count = 0.0;// gamma n0 t
  double k0a = 0.0;
  bool small_k0a = true;      // the closed form assumes k0 a << 1
};

/// Gamma = 4 sqrt(pi) lambda lambdabar_N^2 / (lambda0 a).
ExcitationRate total_excitation_rate(const LaserPulseSpec& spec, const units::CollapseParams& params,
                                     double t);

struct TraceCheck {
  double residual = 0.0;    // [1 - loss] + int P - 1
  double loss = 0.0;        // first-order loss fraction from the beam
  double excitation = 0.0;  // int P d^3k
  [[nodiscard]] bool within(double rel) const;
};
TraceCheck trace_check(const LaserPulseSpec& spec, const units::CollapseParams& params, double t,
                       const quad::Tolerance& tol = {});

struct EnergyBalance {
  double spectrum_path = 0.0;  // int d^3k (k - k0) P(k)
  double kernel_path = 0.0;    // t n0 lambda lambdabar^2 (a^2/pi)^{3/2} f(k0)
  double mismatch = 0.0;       // relative difference
};
EnergyBalance energy_balance_check(const LaserPulseSpec& spec, const units::CollapseParams& params,
                                   double t, const quad::Tolerance& tol = {});

struct AppendixBResult {
  double value = 0.0;             // k0^2 (2pi)^{3/2} / sigma^3
  double sigma_over_a = 0.0;
  bool approximation_degraded = false;  // sigma <= 2a
  double ratio_to_loss_term = 0.0;      // value / (k0 2pi / a^4)
};
AppendixBResult appendixB_I(double k0, double sigma, double a);

/// Monte-Carlo estimate of the four-envelope integral (without the sqrt(k1..k4)
/// ~ k0^2 replacement when `exact_weights` is set).
quad::IntegrationResult appendixB_I_oracle(double k0, double sigma, double a,
                                           const quad::MonteCarloOptions& options,
                                           bool exact_weights = false);

}  // namespace collapse::laser
