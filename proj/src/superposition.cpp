#include "collapse/superposition.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "collapse/bessel.hpp"

namespace collapse::superposition {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::domain_error(msg);
}

void require_kernel_args(double r, double M) {
  require(r > 0.0 && std::isfinite(r), "commutator kernel: r must be positive");
  require(M > 0.0 && std::isfinite(M), "commutator kernel: M must be positive (massless case diverges)");
}

double omega(const quad::Vec3& k, double M) { return std::sqrt(k.squaredNorm() + M * M); }

}  // namespace

void SuperpositionSpec::validate(const units::CollapseParams& params) const {
  params.validate();
  require(N >= 1.0 && std::isfinite(N), "N must be >= 1");
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be positive");
  require(k0 > 0.0 && std::isfinite(k0), "k0 must be positive");
  require(M >= 0.0 && std::isfinite(M), "M must be >= 0");
  require(d >= 0.0 && std::isfinite(d), "d must be >= 0");
  require(k0 * params.a > 3.0, "needs k0 a > 3 (got " + std::to_string(k0 * params.a) + ")");
  require(sigma > 3.0 * params.a, "needs sigma > 3 a");
}

double SuperpositionSpec::overlap() const { return std::exp(-N * d * d / (8.0 * sigma * sigma)); }

std::vector<std::string> SuperpositionSpec::warnings() const {
  std::vector<std::string> w;
  if (overlap() > 1e-6) {
    w.push_back("packets overlap: e^{-N d^2/8 sigma^2} = " + std::to_string(overlap()) + " > 1e-6");
  }
  return w;
}

double SuperpositionSpec::omega2() const { return k0 * k0 + M * M; }

Integrals integrals_closed(const SuperpositionSpec& spec, const units::CollapseParams& params) {
  spec.validate(params);
  const double w2 = spec.omega2();
  const double ratio3 = std::pow(params.a / spec.sigma, 3);
  Integrals I;
  I.I1 = w2 * ratio3;
  I.I2 = w2;
  I.I3 = I.I1 * std::exp(-spec.d * spec.d / (4.0 * spec.sigma * spec.sigma));
  return I;
}

OracleIntegrals integrals_oracle(const SuperpositionSpec& spec, const units::CollapseParams& params,
                                 const quad::MonteCarloOptions& options) {
  spec.validate(params);
  const double a = params.a;
  const double s = spec.sigma;
  const double M = spec.M;
  // alpha(k) = (2 s^2/pi)^{3/4} e^{-(k-k0)^2 s^2}: four factors give the
  // Gaussian weights of width s times (2 s^2/pi)^3.
  const double pref = std::pow(a * a / kPi, 1.5) * std::pow(2.0 * s * s / kPi, 3);
  const quad::GaussianWeight3D env{quad::Vec3(0, 0, spec.k0), s};
  const std::array<quad::GaussianWeight3D, 4> envs{env, env, env, env};
  // Displacement along x, orthogonal to k0.
  const quad::Vec3 dvec(spec.d, 0, 0);

  OracleIntegrals out;
  auto g1 = [M](const quad::Vec3& k1, const quad::Vec3& k2, const quad::Vec3& k3, const quad::Vec3& k4) {
    return std::sqrt(omega(k1, M) * omega(k2, M) * omega(k3, M) * omega(k4, M));
  };
  auto r1 = quad::integrate_constrained_4k(g1, envs, a, options);
  out.I1 = {pref * r1.value, pref * r1.error_estimate, r1.evaluations};

  auto g3 = [M, dvec](const quad::Vec3& k1, const quad::Vec3& k2, const quad::Vec3& k3, const quad::Vec3& k4) {
    return std::sqrt(omega(k1, M) * omega(k2, M) * omega(k3, M) * omega(k4, M)) *
           std::cos(dvec.dot(k2 - k1));
  };
  auto r3 = quad::integrate_constrained_4k(g3, envs, a, options);
  out.I3 = {pref * r3.value, pref * r3.error_estimate, r3.evaluations};

  // I2: k1 from alpha^2 (std 1/(2 s) per axis), k2 from the normalized kernel
  // about k1 (std 1/(a sqrt 2)); the integrand reduces to w1 w2.
  const double s1 = 1.0 / (2.0 * s);
  const double s2 = 1.0 / (std::numbers::sqrt2 * a);
  const double k0 = spec.k0;
  auto draw = [=](rng::CounterStream& st) {
    quad::Vec3 k1, k2;
    for (int c = 0; c < 3; ++c) k1[c] = (c == 2 ? k0 : 0.0) + s1 * st.normal();
    for (int c = 0; c < 3; ++c) k2[c] = k1[c] + s2 * st.normal();
    return omega(k1, M) * omega(k2, M);
  };
  quad::MonteCarloOptions o2 = options;
  o2.seed = options.seed ^ 0x9e3779b97f4a7c15ULL;
  out.I2 = quad::monte_carlo_mean(draw, o2);
  return out;
}

DecayResult offdiag_decay(const SuperpositionSpec& spec, const units::CollapseParams& params, double t) {
  require(t >= 0.0, "t must be >= 0");
  DecayResult r;
  r.integrals = integrals_closed(spec, params);
  const double ratio3 = std::pow(params.a / spec.sigma, 3);
  const double sep = -std::expm1(-spec.d * spec.d / (4.0 * spec.sigma * spec.sigma));
  r.bracket = spec.N * ratio3 * sep + 1.0;
  r.bracket_full = spec.N * ratio3 * sep + (1.0 - ratio3);
  const double mn = params.mass_ref();
  const double pre = spec.N * params.lambda_rate * t * spec.omega2() / (2.0 * mn * mn);
  r.decay = pre * r.bracket;
  r.offdiag = 0.5 - r.decay;
  r.offdiag_full = 0.5 - pre * r.bracket_full;
  r.first_order_valid = r.decay < 0.5;
  return r;
}

double commutator_kernel(double r, double M) {
  require_kernel_args(r, M);
  const double x = M * r;
  return -(M * M / (2.0 * kPi * kPi * r * r)) * (bessel::k0(x) + bessel::k1(x) / x);
}

double commutator_kernel_asymptotic(double r, double M) {
  require_kernel_args(r, M);
  const double lbar = 1.0 / M;
  return -std::exp(-r / lbar) / std::sqrt(std::pow(2.0 * kPi, 3) * std::pow(lbar, 3) * std::pow(r, 5));
}

double commutator_kernel_fourier(double r, double M) {
  require_kernel_args(r, M);
  return -(M * M / (2.0 * kPi * kPi * r * r)) * bessel::k2(M * r);
}

quad::IntegrationResult commutator_kernel_regulated(double r, double M, const quad::Tolerance& tol) {
  require_kernel_args(r, M);
  // F(eps) is analytic for |eps| < r, so a polynomial through these nodes
  // extrapolates to eps = 0.
  constexpr std::array<double, 6> fractions{0.4, 0.3, 0.2, 0.15, 0.1, 0.05};
  std::array<double, 6> eps{};
  std::array<double, 6> val{};
  std::size_t evals = 0;
  double err_sum = 0.0;
  const double half_period = kPi / r;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    eps[i] = fractions[i] * r;
    const double e = eps[i];
    auto f = [=](double k) { return k * std::sqrt(k * k + M * M) * std::sin(k * r) * std::exp(-e * k); };
    const double k_max = 40.0 / e;
    quad::Tolerance chunk_tol = tol;
    double total = 0.0;
    for (double lo = 0.0; lo < k_max; lo += half_period) {
      const auto c = quad::integrate_radial(f, lo, std::min(lo + half_period, k_max), chunk_tol);
      total += c.value;
      err_sum += c.error_estimate;
      evals += c.evaluations;
    }
    val[i] = total / (2.0 * kPi * kPi * r);
  }
  // Neville's scheme at eps = 0.
  std::array<double, 6> p = val;
  const std::size_t n = p.size();
  double last_correction = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double xi = eps[i], xj = eps[i + m];
      const double updated = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
      if (i == 0) last_correction = updated - p[0];
      p[i] = updated;
    }
  }
  const double scale = 1.0 / (2.0 * kPi * kPi * r);
  return {p[0], std::abs(last_correction) + err_sum * scale, evals};
}

}  // namespace collapse::superposition
