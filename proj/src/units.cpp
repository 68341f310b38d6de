#include "collapse/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace collapse::units {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

void PhysicalConstants::validate(bool allow_override) const {
  require_positive(lambda_bar_n, "lambda_bar_n");
  if (!allow_override && (lambda_bar_n < 1.9e-14 || lambda_bar_n > 2.2e-14)) {
    throw std::domain_error("lambda_bar_n outside [1.9e-14, 2.2e-14] cm without override");
  }
}

void CollapseParams::validate() const {
  if (!(lambda_rate >= 0.0) || !std::isfinite(lambda_rate)) {
    throw std::domain_error("lambda_rate must be >= 0");
  }
  require_positive(a, "a");
  require_positive(lambda_bar_n, "lambda_bar_n");
}

double omega(double k, double mass) {
  if (k < 0.0 || mass < 0.0) throw std::domain_error("omega: negative argument");
  if (mass == 0.0) return k;
  if (k == 0.0) return mass;
  return std::hypot(k, mass);
}

double wavelength_to_wavenumber(double wavelength_cm) {
  require_positive(wavelength_cm, "wavelength");
  return 2.0 * kPi / wavelength_cm;
}

double wavenumber_to_wavelength(double k) {
  require_positive(k, "wavenumber");
  return 2.0 * kPi / k;
}

double joules_to_wavenumber(double energy_j) {
  require_positive(energy_j, "energy");
  return energy_j / kHbarCJouleCm;
}

double wavenumber_to_joules(double k) {
  require_positive(k, "wavenumber");
  return k * kHbarCJouleCm;
}

double frequency_to_wavenumber(double nu_hz) {
  require_positive(nu_hz, "frequency");
  return 2.0 * kPi * nu_hz / kSpeedOfLight;
}

double wavenumber_to_frequency(double k) {
  require_positive(k, "wavenumber");
  return k * kSpeedOfLight / (2.0 * kPi);
}

double nm_to_cm(double nm) {
  require_positive(nm, "wavelength_nm");
  return nm * 1.0e-7;
}

double kev_to_wavelength(double kev) {
  require_positive(kev, "photon energy");
  return kPlanckCJouleCm / (kev * 1.0e3 * kJoulePerEv);
}

double wavelength_to_kev(double wavelength_cm) {
  require_positive(wavelength_cm, "wavelength");
  return kPlanckCJouleCm / wavelength_cm / (1.0e3 * kJoulePerEv);
}

double thermal_wavelength(double temperature_k) {
  require_positive(temperature_k, "temperature");
  return kPlanckCJouleCm / (kBoltzmann * temperature_k);
}

double photons_in_pulse(double energy_j, double wavelength_cm) {
  require_positive(energy_j, "pulse energy");
  require_positive(wavelength_cm, "wavelength");
  return energy_j / (kPlanckCJouleCm / wavelength_cm);
}

double beam_segment_energy(double power_w, double length_cm) {
  require_positive(power_w, "power");
  require_positive(length_cm, "length");
  return power_w * (length_cm / kSpeedOfLight);
}

}  // namespace collapse::units
