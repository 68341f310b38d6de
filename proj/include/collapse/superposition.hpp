#pragma once

// Decay of the off-diagonal element between two displaced N-particle
// packets, the three overlap integrals behind it, and the equal-time
// commutator of the energy-density operator.

#include <string>
#include <vector>

#include "collapse/quadrature.hpp"
#include "collapse/units.hpp"

namespace collapse::superposition {

struct SuperpositionSpec {
  double N = 1.0;      // particles per packet
  double sigma = 0.0;  // cm
  double k0 = 0.0;     // cm^-1, orthogonal to the displacement
  double M = 0.0;      // cm^-1
  double d = 0.0;      // |x_L - x_R|, cm

  /// Throws std::domain_error unless k0 a > 3 and sigma > 3 a (and the
  /// fields are finite and non-negative).
  void validate(const units::CollapseParams& params) const;
  /// Packet overlap e^{-N d^2 / 8 sigma^2}.
  [[nodiscard]] double overlap() const;
  /// Non-fatal: overlap above 1e-6.
  [[nodiscard]] std::vector<std::string> warnings() const;
  [[nodiscard]] double omega2() const;
};

struct Integrals {
  double I1 = 0.0;
  double I2 = 0.0;
  double I3 = 0.0;
};

/// I1 = w^2 (a/s)^3, I2 = w^2, I3 = w^2 (a/s)^3 e^{-d^2/4 s^2} with w = omega(k0).
Integrals integrals_closed(const SuperpositionSpec& spec, const units::CollapseParams& params);

struct OracleIntegrals {
  quad::IntegrationResult I1;
  quad::IntegrationResult I2;
  quad::IntegrationResult I3;
};

/// Monte-Carlo values of the unapproximated integrands: sqrt(w1 w2 w3 w4),
/// the Gaussian kernel and, for I3, the relative phase between the packets.
OracleIntegrals integrals_oracle(const SuperpositionSpec& spec, const units::CollapseParams& params,
                                 const quad::MonteCarloOptions& options);

struct DecayResult {
  double offdiag = 0.5;
  double bracket = 1.0;        // N (a/s)^3 (1 - e^{-d^2/4s^2}) + 1
  double bracket_full = 1.0;   // same with 1 - (a/s)^3 in place of the final 1
  double decay = 0.0;          // 1/2 - offdiag
  double offdiag_full = 0.5;   // using bracket_full
  Integrals integrals;
  bool first_order_valid = true;  // decay < 1/2
};

DecayResult offdiag_decay(const SuperpositionSpec& spec, const units::CollapseParams& params, double t);

/// -(M^2 / 2 pi^2 r^2) [K0(Mr) + K1(Mr)/(Mr)], as quoted for the commutator.
double commutator_kernel(double r, double M);
/// -[(2 pi)^3 lbar^3 r^5]^{-1/2} e^{-r/lbar}, lbar = 1/M.
double commutator_kernel_asymptotic(double r, double M);
/// Closed form of the regulated Fourier integral below: -(M^2 / 2 pi^2 r^2) K2(Mr).
double commutator_kernel_fourier(double r, double M);
/// lim_{eps->0} (1/2 pi^2 r) int_0^inf k sqrt(k^2 + M^2) sin(kr) e^{-eps k} dk,
/// by quadrature at several eps and polynomial extrapolation to eps = 0.
quad::IntegrationResult commutator_kernel_regulated(double r, double M, const quad::Tolerance& tol = {});

}  // namespace collapse::superposition
