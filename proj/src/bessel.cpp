#include "collapse/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace collapse::bessel {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxTerms = 10'000;

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("Bessel K: argument must be positive");
}

// Series about the origin with the digamma terms of the logarithmic solution.
std::pair<double, double> series(double x) {
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  const double gamma = std::numbers::egamma;

  double term = 1.0;  // y^k / (k!)^2
  double harmonic = 0.0;
  double i0 = 0.0, sum0 = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    if (k > 0) {
      term *= y / (double(k) * k);
      harmonic += 1.0 / k;
    }
    i0 += term;
    sum0 += term * harmonic;
    if (term < kEps * i0 && k > 2) break;
  }
  const double K0 = -(log_half + gamma) * i0 + sum0;

  // K1 = 1/x + ln(x/2) I1 - (x/4) sum (psi(k+1) + psi(k+2)) y^k / (k! (k+1)!)
  double t = 1.0;  // y^k / (k! (k+1)!)
  double hk = 0.0;
  double i1 = 0.0, sum1 = 0.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    if (k > 0) {
      t *= y / (double(k) * (k + 1));
      hk += 1.0 / k;
    }
    const double psi_sum = (hk - gamma) + (hk + 1.0 / (k + 1) - gamma);
    i1 += t;
    sum1 += psi_sum * t;
    if (t < kEps * i1 && k > 2) break;
  }
  const double K1 = 1.0 / x + log_half * (0.5 * x * i1) - 0.25 * x * sum1;
  return {K0, K1};
}

// Steed's method for the continued fraction CF2 at order 0.
std::pair<double, double> continued_fraction(double x) {
  const double a1 = 0.25;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  double q = a1, c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < kMaxTerms; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h = a1 * h;
  const double K0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  const double K1 = K0 * (x + 0.5 - h) / x;
  return {K0, K1};
}

std::pair<double, double> both(double x) {
  require_positive(x);
  return x <= 2.0 ? series(x) : continued_fraction(x);
}

}  // namespace

double k0(double x) { return both(x).first; }

double k1(double x) { return both(x).second; }

double k2(double x) {
  const auto [K0, K1] = both(x);
  return K0 + 2.0 * K1 / x;
}

}  // namespace collapse::bessel
