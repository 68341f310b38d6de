#include "collapse/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "collapse/philox.hpp"

namespace collapse::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double l1;
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel evaluate_panel(const Function1D& f, double lo, double hi, std::size_t& evals) {
  double err = 0.0;
  double l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, lo, hi, 0, 0.0, &err, &l1);
  evals += 21;
  // With max_depth = 0 the library reports the Kronrod-Gauss difference on the
  // reference interval [-1, 1]; map it back to [lo, hi].
  err *= 0.5 * (hi - lo);
  if (!std::isfinite(v)) {
    throw std::domain_error("integrand is not finite on [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
  }
  return {lo, hi, v, err, l1};
}

// Pairwise sum of panel values after sorting by position, so the result does
// not depend on the order in which panels were refined.
IntegrationResult summarize(std::vector<Panel> panels, std::size_t evals) {
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  std::vector<double> v(panels.size());
  std::vector<double> e(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    v[i] = panels[i].value;
    e[i] = panels[i].error;
  }
  auto pairwise = [](std::vector<double>& xs) {
    for (std::size_t stride = 1; stride < xs.size(); stride *= 2) {
      for (std::size_t i = 0; i + stride < xs.size(); i += 2 * stride) xs[i] += xs[i + stride];
    }
    return xs.empty() ? 0.0 : xs[0];
  };
  return {pairwise(v), pairwise(e), evals};
}

IntegrationResult adaptive(const Function1D& f, std::span<const double> breaks, const Tolerance& tol) {
  if (!(tol.rel > 0.0) && !(tol.abs > 0.0)) {
    throw std::domain_error("tolerance must be positive");
  }
  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  std::vector<Panel> settled;
  std::size_t evals = 0;
  double total = 0.0;
  double total_err = 0.0;
  double total_l1 = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) throw std::domain_error("breakpoints must increase");
    Panel p = evaluate_panel(f, breaks[i], breaks[i + 1], evals);
    total += p.value;
    total_err += p.error;
    total_l1 += p.l1;
    queue.push(p);
  }

  auto converged = [&] {
    const double target = std::max({tol.rel * std::abs(total), tol.abs, 8.0 * kEps * total_l1});
    return total_err <= target;
  };

  std::size_t since_resum = 0;
  while (!queue.empty() && !converged()) {
    if (evals >= tol.max_evaluations) {
      std::vector<Panel> all = settled;
      while (!queue.empty()) {
        all.push_back(queue.top());
        queue.pop();
      }
      throw IntegrationError("quadrature did not converge within the evaluation budget",
                             summarize(std::move(all), evals));
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      settled.push_back(worst);  // cannot bisect further in floating point
      continue;
    }
    Panel left = evaluate_panel(f, worst.lo, mid, evals);
    Panel right = evaluate_panel(f, mid, worst.hi, evals);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);

    // Running sums drift; rebuild them now and then.
    if (++since_resum == 256) {
      since_resum = 0;
      std::vector<Panel> all = settled;
      auto copy = queue;
      while (!copy.empty()) {
        all.push_back(copy.top());
        copy.pop();
      }
      total = total_err = total_l1 = 0.0;
      for (const auto& p : all) {
        total += p.value;
        total_err += p.error;
        total_l1 += p.l1;
      }
    }
  }

  std::vector<Panel> all = std::move(settled);
  while (!queue.empty()) {
    all.push_back(queue.top());
    queue.pop();
  }
  return summarize(std::move(all), evals);
}

// Orthonormal vector perpendicular to the unit vector n.
Vec3 perpendicular(const Vec3& n) {
  const Vec3 trial = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  return (trial - trial.dot(n) * n).normalized();
}

}  // namespace

IntegrationResult integrate_radial(const Function1D& f, double k_min, double k_max,
                                   const Tolerance& tol) {
  if (!std::isfinite(k_min) || std::isnan(k_max) || !(k_min < k_max)) {
    throw std::domain_error("integrate_radial: require finite k_min < k_max");
  }
  if (std::isinf(k_max)) {
    // k = k_min + t / (1 - t), dk = dt / (1 - t)^2.
    Function1D mapped = [&f, k_min](double t) {
      const double s = 1.0 - t;
      return f(k_min + t / s) / (s * s);
    };
    const double b[] = {0.0, 0.5, 1.0};
    return adaptive(mapped, b, tol);
  }
  const double b[] = {k_min, k_max};
  return adaptive(f, b, tol);
}

IntegrationResult integrate_panels(const Function1D& f, std::span<const double> breakpoints,
                                   const Tolerance& tol) {
  if (breakpoints.size() < 2) throw std::domain_error("integrate_panels: need two breakpoints");
  return adaptive(f, breakpoints, tol);
}

std::vector<double> geometric_breakpoints(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count == 0) {
    throw std::domain_error("geometric_breakpoints: require 0 < lo < hi and count > 0");
  }
  std::vector<double> out(count + 1);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i <= count; ++i) {
    out[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

double GaussianWeight3D::operator()(const Vec3& k) const {
  return std::exp(-(k - center).squaredNorm() * width * width);
}

double GaussianWeight3D::norm() const {
  return std::pow(std::numbers::pi / (width * width), 1.5);
}

IntegrationResult integrate_gaussian_3d(const Function3D& f, const GaussianWeight3D& weight,
                                        const Tolerance& tol) {
  if (!(weight.width > 0.0) || !std::isfinite(weight.width)) {
    throw std::domain_error("GaussianWeight3D: width must be positive");
  }
  const double c_norm = weight.center.norm();
  const Vec3 axis = c_norm > 0.0 ? Vec3(weight.center / c_norm) : Vec3::UnitZ();
  const Vec3 side = perpendicular(axis);
  const double s2 = weight.width * weight.width;

  Tolerance inner_tol = tol;
  inner_tol.rel = tol.rel * 0.1;
  inner_tol.abs = 0.0;
  std::size_t inner_evals = 0;

  Function1D radial = [&](double delta) {
    if (delta == 0.0) return 0.0;
    Function1D polar = [&](double u) {
      const double sin_t = std::sqrt(std::max(0.0, 1.0 - u * u));
      const Vec3 k = weight.center + delta * (u * axis + sin_t * side);
      return f(k);
    };
    const auto r = integrate_radial(polar, -1.0, 1.0, inner_tol);
    inner_evals += r.evaluations;
    return 2.0 * std::numbers::pi * delta * delta * std::exp(-delta * delta * s2) * r.value;
  };

  // Panels at multiples of the Gaussian scale keep the bulk well resolved.
  const double scale = 1.0 / weight.width;
  const double breaks[] = {0.0, 0.5 * scale, scale, 2.0 * scale, 4.0 * scale, weight.truncation()};
  auto result = integrate_panels(radial, breaks, tol);
  result.evaluations += inner_evals;
  return result;
}

double gaussian_angular_integral(double k, double q, double a) {
  const double a2 = a * a;
  const double x = 4.0 * k * q * a2;
  const double diff = (k - q) * (k - q) * a2;
  if (x < 1e-300) return 2.0 * std::exp(-(k * k + q * q) * a2);
  return std::exp(-diff) * (-std::expm1(-x)) / (0.5 * x);
}

IntegrationResult integrate_isotropic_kernel(const Function1D& F, double k, double a,
                                             const Tolerance& tol, double q_max) {
  if (!(a > 0.0) || !(k >= 0.0)) throw std::domain_error("integrate_isotropic_kernel: bad k or a");
  Function1D radial = [&](double q) {
    return 2.0 * std::numbers::pi * q * q * F(q) * gaussian_angular_integral(k, q, a);
  };
  const double s = 1.0 / a;
  std::vector<double> breaks;
  if (q_max > 0.0) {
    breaks = {0.0, q_max};
    for (double b : {0.5 * s, s, 2.0 * s, 4.0 * s, k - 2.0 * s, k, k + 2.0 * s}) {
      if (b > 0.0 && b < q_max) breaks.push_back(b);
    }
  } else {
    const double lo = std::max(0.0, k - 10.0 * s);
    breaks = {lo, k + 10.0 * s};
    for (double b : {k - 4.0 * s, k - s, k, k + s, k + 4.0 * s, 0.5 * s, s, 2.0 * s}) {
      if (b > lo && b < k + 10.0 * s) breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return integrate_panels(radial, breaks, tol);
}

namespace {

struct Moments {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
};

Moments merge(const Moments& x, const Moments& y) {
  if (x.count == 0.0) return y;
  if (y.count == 0.0) return x;
  const double n = x.count + y.count;
  const double delta = y.mean - x.mean;
  return {n, x.mean + delta * y.count / n, x.m2 + y.m2 + delta * delta * x.count * y.count / n};
}

}  // namespace

IntegrationResult monte_carlo_mean(const SampleFunction& draw, const MonteCarloOptions& options) {
  if (options.samples < 2) throw std::domain_error("monte_carlo_mean: at least two samples required");
  const std::size_t n_blocks = (options.samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<Moments> blocks(n_blocks);

  auto run_block = [&](std::size_t b) {
    rng::CounterStream stream(options.seed, b);
    const std::size_t begin = b * kMonteCarloBlock;
    const std::size_t end = std::min(options.samples, begin + kMonteCarloBlock);
    Moments m;
    for (std::size_t s = begin; s < end; ++s) {
      const double x = draw(stream);
      m.count += 1.0;
      const double d = x - m.mean;
      m.mean += d / m.count;
      m.m2 += d * (x - m.mean);
    }
    blocks[b] = m;
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
  if (threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t b = t; b < n_blocks; b += threads) run_block(b);
      });
    }
  }

  for (std::size_t stride = 1; stride < blocks.size(); stride *= 2) {
    for (std::size_t i = 0; i + stride < blocks.size(); i += 2 * stride) {
      blocks[i] = merge(blocks[i], blocks[i + stride]);
    }
  }
  const Moments& total = blocks.front();
  const double variance = total.count > 1.0 ? total.m2 / (total.count - 1.0) : 0.0;
  return {total.mean, std::sqrt(variance / total.count), options.samples};
}

IntegrationResult integrate_constrained_4k(const Function4K& g,
                                           const std::array<GaussianWeight3D, 4>& envelopes,
                                           double kernel_width, const MonteCarloOptions& options) {
  for (const auto& e : envelopes) {
    if (!(e.width > 0.0) || !std::isfinite(e.width)) {
      throw std::domain_error("integrate_constrained_4k: envelope widths must be positive");
    }
  }
  if (!(kernel_width >= 0.0)) throw std::domain_error("kernel width must be >= 0");
  if (options.samples < 100'000) {
    throw std::domain_error("integrate_constrained_4k: at least 1e5 samples required");
  }

  double volume = 1.0;
  std::array<double, 3> spread{};
  for (int i = 0; i < 3; ++i) {
    volume *= envelopes[i].norm();
    spread[i] = 1.0 / (std::numbers::sqrt2 * envelopes[i].width);
  }
  const double a2 = kernel_width * kernel_width;

  auto draw = [&](rng::CounterStream& stream) {
    std::array<Vec3, 3> k;
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 3; ++c) k[i][c] = envelopes[i].center[c] + spread[i] * stream.normal();
    }
    const Vec3 k4 = k[0] - k[1] + k[2];
    const double kernel = a2 > 0.0 ? std::exp(-(k[0] - k[1]).squaredNorm() * a2) : 1.0;
    return g(k[0], k[1], k[2], k4) * envelopes[3](k4) * kernel * volume;
  };
  return monte_carlo_mean(draw, options);
}

}  // namespace collapse::quad
