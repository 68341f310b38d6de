#pragma once

// Internal unit policy: hbar = c = 1, lengths in cm, (angular) wavenumbers in
// cm^-1, times in s. Energies are carried as wavenumbers; multiply by
// kHbarCJouleCm to get joules. Rates that come out of the collapse dissipator
// are in s^-1 because lambda carries the time unit.

#include <numbers>

namespace collapse::units {

inline constexpr double kPi = std::numbers::pi;

/// Speed of light [cm/s].
inline constexpr double kSpeedOfLight = 2.99792458e10;
/// Planck constant [J s].
inline constexpr double kPlanck = 6.62607015e-34;
/// Reduced Planck constant [J s].
inline constexpr double kHbar = kPlanck / (2.0 * kPi);
/// h c [J cm]; energy of a photon of wavelength 1 cm.
inline constexpr double kPlanckCJouleCm = kPlanck * kSpeedOfLight;
/// hbar c [J cm]; converts a wavenumber k to the energy hbar c k.
inline constexpr double kHbarCJouleCm = kHbar * kSpeedOfLight;
/// hbar c [erg cm].
inline constexpr double kHbarCErgCm = kHbarCJouleCm * 1.0e7;
/// Boltzmann constant [J/K].
inline constexpr double kBoltzmann = 1.380649e-23;
/// Elementary charge [J/eV].
inline constexpr double kJoulePerEv = 1.602176634e-19;
/// Julian year [s].
inline constexpr double kSecondsPerYear = 3.15576e7;
/// Default reduced Compton wavelength of the nucleon [cm]; hbar/(M_N c) = 2.1003e-14.
inline constexpr double kDefaultLambdaBarN = 2.1e-14;

struct PhysicalConstants {
  double hbar_c = kHbarCErgCm;           // erg cm
  double lambda_bar_n = kDefaultLambdaBarN;  // cm
  double boltzmann = kBoltzmann;         // J/K
  double speed_of_light = kSpeedOfLight; // cm/s
  double seconds_per_year = kSecondsPerYear;

  /// Throws std::domain_error if lambda_bar_n leaves [1.9e-14, 2.2e-14] cm
  /// and allow_override is false.
  void validate(bool allow_override = false) const;
};

/// Phenomenological collapse parameters.
struct CollapseParams {
  double lambda_rate = 1.0e-16;                // s^-1
  double a = 1.0e-5;                           // cm
  double lambda_bar_n = kDefaultLambdaBarN;    // cm

  /// Nucleon mass as an inverse length, 1 / lambda_bar_n [cm^-1].
  [[nodiscard]] double mass_ref() const { return 1.0 / lambda_bar_n; }

  /// lambda_rate >= 0, a > 0, lambda_bar_n > 0.
  void validate() const;
};

/// sqrt(k^2 + M^2); both arguments in cm^-1 and non-negative.
double omega(double k, double mass);

// Conversions. All throw std::domain_error on non-positive input.
double wavelength_to_wavenumber(double wavelength_cm);
double wavenumber_to_wavelength(double k);
double joules_to_wavenumber(double energy_j);
double wavenumber_to_joules(double k);
double frequency_to_wavenumber(double nu_hz);
double wavenumber_to_frequency(double k);
double nm_to_cm(double nm);
double kev_to_wavelength(double kev);
double wavelength_to_kev(double wavelength_cm);
/// Thermal wavelength h c / (k_B T) [cm].
double thermal_wavelength(double temperature_k);

/// Mean photon count of a pulse of the given energy [J] and wavelength [cm].
double photons_in_pulse(double energy_j, double wavelength_cm);

/// Energy [J] in a beam segment of the given length for a CW beam of given power [W].
double beam_segment_energy(double power_w, double length_cm);

}  // namespace collapse::units
