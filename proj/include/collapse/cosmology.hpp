#pragma once

// Collapse-induced loss of photons from the cosmic blackbody spectrum:
// single-mode evolution, the redshift-weighted time integral, the distorted
// spectrum today, and the question of whether the distortion can be told
// apart from a slightly cooler blackbody.

#include <string>
#include <string_view>
#include <vector>

#include "collapse/quadrature.hpp"
#include "collapse/units.hpp"

namespace collapse::cosmology {

struct CosmologyScenario {
  double T0 = 2.72548;   // K
  double t0 = 4.0e17;    // s
  double Z0 = 1000.0;
  double delta = 2e-4;   // relative temperature uncertainty
  units::CollapseParams params{};

  void validate() const;
  /// hc / (k_B T0), cm.
  [[nodiscard]] double thermal_wavelength() const;
  /// 1 / (k_B T0) as a length, lambda_Th / (2 pi).
  [[nodiscard]] double beta() const;
};

/// (1/t0) int_0^t0 [1 + Z(t)] dt for Z(t) = Z0 (1 - t/t0), i.e. 1 + Z0/2.
double redshift_time_integral(const CosmologyScenario& s);

/// Photons per unit volume per unit frequency, 8 pi nu^2 / (c^3 (e^{h nu / k T} - 1)), cm^-3 Hz^-1.
double planck_occupancy(double nu_hz, double temperature_k);

/// Fractional photon loss at present wavelength lambda0 accumulated since recombination.
double fractional_loss(double lambda0_cm, const CosmologyScenario& s);

struct SpectrumPoint {
  double lambda0 = 0.0;            // cm
  double nu0 = 0.0;                // Hz
  double planck_occupancy = 0.0;   // cm^-3 Hz^-1
  double distorted_occupancy = 0.0;
  double fractional_loss = 0.0;
  bool kernel_approx_valid = true;  // k0s (1 + Z0) a < 0.3
  bool first_order_valid = true;    // fractional loss < 1
};

/// 200 log-spaced wavelengths over [0.05, 50] cm.
std::vector<double> default_wavelength_grid(std::size_t points = 200);

SpectrumPoint spectrum_point(double lambda0_cm, const CosmologyScenario& s);
std::vector<SpectrumPoint> distorted_spectrum(const std::vector<double>& lambda0_grid,
                                              const CosmologyScenario& s);

/// int d^3k k / (e^{beta k} - 1) = 4 pi Gamma(4) zeta(4) / beta^4.
double bose_integral(double beta);
/// The same with zeta(4) set to 1: 24 pi / beta^4.
double bose_integral_approx(double beta);

struct GainResult {
  double gain = 0.0;           // energy in mode s from the gain term (zeta(4) -> 1), cm^-1
  double loss = 0.0;           // 2 k_s n_s times the loss fraction, cm^-1
  double loss_coefficient = 0.0;  // 2 k_s times the loss fraction, occupation left out
  double loss_gain_ratio = 0.0;        // loss_coefficient / gain
  double loss_gain_ratio_occupied = 0.0;  // with 1/(e^{beta k_s} - 1) included
};

/// The two collapse terms for a mode of wavelength lambda_s after time t,
/// at the present temperature.
GainResult gain_term(double lambda_s_cm, const CosmologyScenario& s, double t);

enum class DegeneracyRegime { short_wavelength, intermediate, long_wavelength };
std::string_view to_string(DegeneracyRegime r);

struct DegeneracyVerdict {
  DegeneracyRegime regime = DegeneracyRegime::intermediate;
  double x = 0.0;                    // lambda_Th0 / lambda0
  double temperature_bracket = 0.0;  // e^x x / (e^x - 1): multiplies delta
  double loss_per_lambda = 0.0;      // fractional loss per unit lambda (s)
  bool degenerate = false;           // indistinguishable from a cooler blackbody
  double effective_delta_per_lambda = 0.0;  // short regime only
  double lambda_bound = 0.0;                // long regime only, s^-1
  bool has_bound = false;
};

/// short if lambda_Th0 / lambda0 >= 2, long if <= 0.6, else intermediate.
DegeneracyVerdict temperature_degeneracy(double lambda0_cm, const CosmologyScenario& s);

struct ModeEvolution {
  double energy = 0.0;     // epsilon_s, both polarizations, cm^-1
  double occupancy = 0.0;  // epsilon_s / k_s
  double planck = 0.0;     // 2 k_s / (e^{beta k_s} - 1)
  double loss = 0.0;       // subtracted from the Planck term
  double gain = 0.0;       // quadrature of the kick-in integral
};

/// Mode energy after time t at fixed temperature T0, with the kernel
/// approximated by e^{-k1^2 a^2} in both integrals.
ModeEvolution mode_evolution(double k_s, const CosmologyScenario& s, double t,
                             const quad::Tolerance& tol = {});

/// Rate of photon number in mode k_s (both polarizations) with the full
/// kernel e^{-(k_s - k1)^2 a^2}: -2 C k_s int d^3k1 k1 (n_s - n_1) K.
/// Returned as the loss and gain parts separately.
struct NumberRate {
  double loss = 0.0;
  double gain = 0.0;
  [[nodiscard]] double net() const { return gain - loss; }
};
NumberRate number_rate(double k_s, const CosmologyScenario& s, const quad::Tolerance& tol = {});

struct ConservationCheck {
  double loss_total = 0.0;  // int d^3k_s of the loss part
  double gain_total = 0.0;
  double relative = 0.0;    // |gain - loss| / loss
};
/// int d^3k_s dn_s/dt should vanish.
ConservationCheck number_conservation(const CosmologyScenario& s, const quad::Tolerance& tol = {});

struct EnergyCheck {
  double mode_sum = 0.0;  // int d^3k_s k_s dn_s/dt
  double kernel = 0.0;    // 2 C int d^3k1 n(k1) f(k1)
  double relative = 0.0;
};
EnergyCheck energy_two_path(const CosmologyScenario& s, const quad::Tolerance& tol = {});

}  // namespace collapse::cosmology
