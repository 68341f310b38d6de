#include "collapse/energy_gain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace collapse::energy_gain {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

double prefactor(const units::CollapseParams& p) {
  const double lb2 = p.lambda_bar_n * p.lambda_bar_n;
  return p.lambda_rate * lb2 * std::pow(p.a * p.a / kPi, 1.5);
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::exact: return "exact";
    case Regime::low_ka: return "low_ka";
    case Regime::high_ka: return "high_ka";
    case Regime::nonrel: return "nonrel";
  }
  return "unknown";
}

Regime parse_regime(std::string_view label) {
  if (label == "exact") return Regime::exact;
  if (label == "low_ka") return Regime::low_ka;
  if (label == "high_ka") return Regime::high_ka;
  if (label == "nonrel") return Regime::nonrel;
  throw std::invalid_argument("unknown regime '" + std::string(label) + "'");
}

quad::IntegrationResult f_exact(double k1, double mass, double a, const quad::Tolerance& tol) {
  require(k1 >= 0.0 && mass >= 0.0, "f_exact: k1 and M must be >= 0");
  require(a > 0.0, "f_exact: a must be positive");
  const double w1 = units::omega(k1, mass);
  if (w1 == 0.0) return {0.0, 0.0, 1};

  // Delta = k2 - k1 in spherical coordinates about k1; u = cos(angle).
  // w2^2 = w1^2 + N with N = Delta^2 + 2 k1 Delta u, so w2 - w1 = N/(w1 + w2).
  // The part of w1 w2 N/(w1 + w2) that is odd in u integrates to zero and is
  // removed analytically, leaving a cancellation-free integrand.
  quad::Tolerance inner = tol;
  inner.rel = tol.rel * 0.1;
  inner.abs = 0.0;
  std::size_t inner_evals = 0;

  quad::Function1D radial = [&](double d) {
    if (d == 0.0) return 0.0;
    quad::Function1D polar = [&](double u) {
      const double n = d * d + 2.0 * k1 * d * u;
      const double w2 = std::sqrt(std::max(0.0, w1 * w1 + n));
      const double s = w1 + w2;
      return w1 * (w2 * d * d + k1 * d * u * n / s) / s;
    };
    const auto r = quad::integrate_radial(polar, -1.0, 1.0, inner);
    inner_evals += r.evaluations;
    return 2.0 * kPi * d * d * std::exp(-d * d * a * a) * r.value;
  };

  const double s = 1.0 / a;
  std::vector<double> breaks{0.0, 0.5 * s, s, 2.0 * s, 4.0 * s, 10.0 * s};
  // When |k2| can reach zero inside the Gaussian the integrand has a kink at
  // Delta = k1 (for photons); give the engine a panel boundary there.
  if (k1 > 0.0 && k1 < 10.0 * s) {
    breaks.push_back(k1);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  }
  auto res = quad::integrate_panels(radial, breaks, tol);
  res.evaluations += inner_evals;
  return res;
}

double f_low_ka_photon(double k1, double a) {
  require(k1 >= 0.0 && a > 0.0, "f_low_ka_photon: need k1 >= 0, a > 0");
  return k1 * std::pow(kPi / (a * a), 1.5) * 3.0 / (2.0 * a * a);
}

double f_high_ka(double k1, double mass, double a) {
  require(a > 0.0, "f_high_ka: a must be positive");
  const double w1 = units::omega(k1, mass);
  if (w1 == 0.0) return 0.0;
  return w1 * std::pow(kPi, 1.5) / std::pow(a, 5) * (0.75 + k1 * k1 / (4.0 * w1 * w1));
}

double f_nonrel(double mass, double a) {
  require(mass > 0.0 && a > 0.0, "f_nonrel: need M > 0, a > 0");
  return 0.5 * mass * std::pow(kPi, 1.5) / (a * a * a) * 3.0 / (2.0 * a * a);
}

double mean_energy_growth(double mean_energy, Regime regime, const units::CollapseParams& params) {
  params.validate();
  require(mean_energy >= 0.0, "mean_energy_growth: H must be >= 0");
  const double r = params.lambda_bar_n / params.a;
  switch (regime) {
    case Regime::low_ka: return 1.5 * params.lambda_rate * r * r * mean_energy;
    case Regime::high_ka: return params.lambda_rate * r * r * mean_energy;
    default: break;
  }
  throw std::invalid_argument("mean_energy_growth: regime must be low_ka or high_ka");
}

double dHdt_nonrel(double count, double mass, const units::CollapseParams& params) {
  params.validate();
  require(count >= 0.0, "dHdt_nonrel: N must be >= 0");
  require(mass > 0.0, "dHdt_nonrel: M must be positive (massless particles use the photon paths)");
  const double mn = params.mass_ref();
  return params.lambda_rate * 3.0 / (4.0 * mass * params.a * params.a) * (mass * mass) / (mn * mn) *
         count;
}

EnergyGainResult energy_gain_rate(double k1, double mass, const units::CollapseParams& params,
                                  Regime regime, const quad::Tolerance& tol) {
  params.validate();
  EnergyGainResult out;
  out.regime = regime;
  out.k1 = k1;
  out.mass = mass;
  out.a = params.a;
  out.free_particle_only = mass > 0.0 && regime != Regime::nonrel;
  switch (regime) {
    case Regime::exact: out.kernel = f_exact(k1, mass, params.a, tol).value; break;
    case Regime::low_ka:
      require(mass == 0.0, "low_ka kernel applies to photons only");
      out.kernel = f_low_ka_photon(k1, params.a);
      break;
    case Regime::high_ka: out.kernel = f_high_ka(k1, mass, params.a); break;
    case Regime::nonrel: out.kernel = f_nonrel(mass, params.a); break;
  }
  out.rate = prefactor(params) * out.kernel;
  out.rate_joule = out.rate * units::kHbarCJouleCm;
  return out;
}

}  // namespace collapse::energy_gain
