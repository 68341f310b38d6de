#pragma once

// Numerical integration engine used as the independent oracle for every
// closed form in the library: globally adaptive Gauss-Kronrod in 1-D, a
// reduced (radial x polar) quadrature for Gaussian-weighted 3-D integrals,
// and an importance-sampled Monte-Carlo estimator for four-momentum
// integrals carrying a momentum-conservation delta.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "collapse/philox.hpp"

namespace collapse::quad {

using Vec3 = Eigen::Vector3d;

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Thrown when the evaluation budget runs out; carries the best estimate.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, IntegrationResult best)
      : std::runtime_error(what), best_(best) {}
  [[nodiscard]] const IntegrationResult& best() const { return best_; }

 private:
  IntegrationResult best_;
};

/// Converged when error <= max(rel * |value|, abs), or when the error has
/// reached the round-off floor of the integrand's L1 norm.
struct Tolerance {
  double rel = 1e-8;
  double abs = 0.0;
  std::size_t max_evaluations = 4'000'000;
};

using Function1D = std::function<double(double)>;
using Function3D = std::function<double(const Vec3&)>;

/// Adaptive 1-D quadrature over [k_min, k_max]. k_max may be +infinity, in
/// which case the interval is mapped onto [0, 1).
IntegrationResult integrate_radial(const Function1D& f, double k_min, double k_max,
                                   const Tolerance& tol = {});

/// Same engine, seeded with the panels between consecutive breakpoints.
/// Useful when the integrand has features on widely separated scales.
IntegrationResult integrate_panels(const Function1D& f, std::span<const double> breakpoints,
                                   const Tolerance& tol = {});

/// Geometric breakpoints from lo to hi (lo > 0), `count` panels.
std::vector<double> geometric_breakpoints(double lo, double hi, std::size_t count);

/// Weight exp(-(k - center)^2 width^2).
struct GaussianWeight3D {
  Vec3 center = Vec3::Zero();
  double width = 1.0;  // cm (the inverse of the momentum spread)

  /// Radial cutoff standing in for infinity: tail below exp(-100).
  [[nodiscard]] double truncation() const { return 10.0 / width; }
  [[nodiscard]] double operator()(const Vec3& k) const;
  /// Integral of the weight over all of k-space, (pi / width^2)^{3/2}.
  [[nodiscard]] double norm() const;
};

/// Integral over d^3k of f(k) * weight(k). f must be azimuthally symmetric
/// about the axis through the origin and the weight's center, so the
/// integral reduces to radial (about the center) x polar angle.
IntegrationResult integrate_gaussian_3d(const Function3D& f, const GaussianWeight3D& weight,
                                        const Tolerance& tol = {});

/// int_{-1}^{1} du exp(-(k^2 + q^2 - 2 k q u) a^2): the polar integral of a
/// Gaussian kernel between vectors of lengths k and q. Cancellation-free.
double gaussian_angular_integral(double k, double q, double a);

/// int d^3q F(|q|) exp(-(k - q)^2 a^2) for a vector of length k, as a 1-d
/// radial quadrature with the angle done analytically. F must decay fast
/// enough that the range [max(0, k - 10/a), k + 10/a] captures the integral
/// unless `q_max` is given, in which case [0, q_max] is used with extra
/// breakpoints at the scales 1/a and k.
IntegrationResult integrate_isotropic_kernel(const Function1D& F, double k, double a,
                                             const Tolerance& tol = {}, double q_max = 0.0);

using Function4K =
    std::function<double(const Vec3& k1, const Vec3& k2, const Vec3& k3, const Vec3& k4)>;

struct MonteCarloOptions {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Monte-Carlo estimate of
///   int d^3k1..d^3k4 delta(-k1 + k2 - k3 + k4) g(k1..k4)
///       * prod_i envelope_i(k_i) * exp(-(k1 - k2)^2 kernel_width^2).
/// k4 = k1 - k2 + k3 is eliminated; (k1, k2, k3) are drawn from their
/// normalized envelopes. error_estimate is the standard error. Results are
/// independent of the thread count: samples are split into fixed blocks
/// whose partial moments are combined by pairwise reduction in block order.
IntegrationResult integrate_constrained_4k(const Function4K& g,
                                           const std::array<GaussianWeight3D, 4>& envelopes,
                                           double kernel_width, const MonteCarloOptions& options);

using SampleFunction = std::function<double(rng::CounterStream&)>;

/// Sample mean of draw() with its standard error. Sample block b uses
/// substream b of the seed, so the result does not depend on threads.
IntegrationResult monte_carlo_mean(const SampleFunction& draw, const MonteCarloOptions& options);

/// Number of samples per Monte-Carlo block.
inline constexpr std::size_t kMonteCarloBlock = 8192;

}  // namespace collapse::quad
