#pragma once

// Anomalous energy increase of free particles under energy-density collapse:
// the single-particle kernel f(k1) and its asymptotic regimes.

#include <string>
#include <string_view>

#include "collapse/quadrature.hpp"
#include "collapse/units.hpp"

namespace collapse::energy_gain {

enum class Regime { exact, low_ka, high_ka, nonrel };

std::string_view to_string(Regime r);
/// Throws std::invalid_argument for an unknown label.
Regime parse_regime(std::string_view label);

/// f(k1) = int d^3k2 w1 w2 (w2 - w1) exp(-(k2 - k1)^2 a^2), by quadrature.
/// Units: cm^-6 (k^3 from the measure times three energies).
quad::IntegrationResult f_exact(double k1, double mass, double a, const quad::Tolerance& tol = {});

/// k1 (pi/a^2)^{3/2} 3/(2a^2): photons with k1 a << 1.
double f_low_ka_photon(double k1, double a);

/// w1 pi^{3/2}/a^5 [3/4 + k1^2/(4 w1^2)]: k1 a >> 1, any mass.
double f_high_ka(double k1, double mass, double a);

/// (M^2 / 2M) (pi^{3/2}/a^3)(3/(2a^2)): the non-relativistic kernel.
double f_nonrel(double mass, double a);

/// Growth of the mean energy dH/dt = c lambda (lambdabar_N/a)^2 H with c = 3/2
/// (low_ka) or 1 (high_ka). Any other regime throws std::invalid_argument.
double mean_energy_growth(double mean_energy, Regime regime, const units::CollapseParams& params);

/// Non-relativistic heating of N particles of mass M:
/// lambda (3 / (4 M a^2)) (M^2 / M_N^2) N, in cm^-1 per second.
double dHdt_nonrel(double count, double mass, const units::CollapseParams& params);

struct EnergyGainResult {
  Regime regime = Regime::exact;
  double rate = 0.0;          // cm^-1 / s per particle
  double rate_joule = 0.0;    // J / s per particle
  double kernel = 0.0;        // f(k1) in the chosen regime
  double k1 = 0.0;
  double mass = 0.0;
  double a = 0.0;
  bool free_particle_only = false;  // massive relativistic rates ignore potentials
};

/// Per-particle rate lambda/M_N^2 (a^2/pi)^{3/2} f(k1) in the named regime.
/// nonrel requires mass > 0.
EnergyGainResult energy_gain_rate(double k1, double mass, const units::CollapseParams& params,
                                  Regime regime, const quad::Tolerance& tol = {});

}  // namespace collapse::energy_gain
