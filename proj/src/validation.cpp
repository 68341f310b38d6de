#include "collapse/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "collapse/cosmology.hpp"
#include "collapse/energy_gain.hpp"
#include "collapse/laser.hpp"
#include "collapse/lindblad_fock.hpp"
#include "collapse/superposition.hpp"
#include "collapse/units.hpp"

namespace collapse::validation {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double rel(double value, double target) { return std::abs(value / target - 1.0); }

Check within_rel(const std::string& name, double value, double target, double tol) {
  const double r = rel(value, target);
  return {name, r <= tol, num(value) + " vs " + num(target) + " (rel " + num(r) + ", limit " + num(tol) + ")"};
}

template <class Body>
CriterionResult timed(int id, std::string title, double limit, Body body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.time_limit = limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r.checks);
  } catch (const std::exception& e) {
    r.checks.push_back({"exception", false, e.what()});
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

units::CollapseParams grw() { return {}; }

laser::LaserPulseSpec vulcan() {
  return laser::LaserPulseSpec::from_wavelength(units::nm_to_cm(1053.0), 1e-2, 2.5e21, 1.0);
}

laser::LaserPulseSpec cw_beam() {
  const double lambda0 = 1e-4;
  const double energy = units::beam_segment_energy(1e6, 300.0);
  return laser::LaserPulseSpec::from_wavelength(lambda0, 300.0, units::photons_in_pulse(energy, lambda0), 1.0);
}

}  // namespace

bool CriterionResult::passed() const {
  if (checks.empty() || !within_time()) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

CriterionResult criterion_vulcan(const SuiteOptions&) {
  return timed(1, "Vulcan loss coefficients", 1.0, [](std::vector<Check>& out) {
    const auto p = grw();
    const auto s = vulcan();
    const auto low = laser::mean_photons(s, p, 1.0, laser::LossRegime::low_k0a);
    const auto high = laser::mean_photons(s, p, 1.0, laser::LossRegime::high_k0a);
    out.push_back(within_rel("low-k0a coefficient ~ 0.75e4", low.loss_coefficient, 0.75e4, 0.10));
    out.push_back(within_rel("high-k0a coefficient ~ 1.0e4", high.loss_coefficient, 1.0e4, 0.10));
    const auto exact = laser::mean_photons(s, p, 1.0, laser::LossRegime::exact, {1e-6});
    out.push_back({"exact coefficient (informational)", true,
                   num(exact.loss_coefficient) + " at k0a = " + num(exact.k0a)});
  });
}

CriterionResult criterion_lcls(const SuiteOptions&) {
  return timed(2, "LCLS loss coefficient", 1.0, [](std::vector<Check>& out) {
    // The quoted ratio lambdabar_N / lambda0 = 1e-13 cm / 1e-8 cm.
    units::CollapseParams p;
    p.lambda_bar_n = 1e-13;
    const auto stated = laser::LaserPulseSpec::from_wavelength(1e-8, 0.015, 1e12, 1.0);
    const auto r = laser::mean_photons(stated, p, 1.0, laser::LossRegime::high_k0a);
    out.push_back(within_rel("high-k0a coefficient ~ 100 (stated ratio 1e-5)", r.loss_coefficient, 100.0, 0.10));
    const auto phys = laser::LaserPulseSpec::from_wavelength(units::kev_to_wavelength(8.3), 0.015, 1e12, 1.0);
    const auto rp = laser::mean_photons(phys, grw(), 1.0, laser::LossRegime::high_k0a);
    out.push_back({"same with 8.3 keV and lambdabar_N = 2.1e-14 (informational)", true, num(rp.loss_coefficient)});
  });
}

CriterionResult criterion_cw(const SuiteOptions&) {
  return timed(3, "CW excitation rate", 1.0, [](std::vector<Check>& out) {
    auto p = grw();
    p.lambda_rate = 1.0;  // coefficients of lambda
    const auto s = cw_beam();
    const auto r = laser::total_excitation_rate(s, p, units::kSecondsPerYear);
    out.push_back(within_rel("Gamma n0 ~ 0.14 lambda", r.gamma_n0, 0.14, 0.10));
    out.push_back(within_rel("yearly yield ~ 4e6 lambda", r.expected_count, 4e6, 0.15));
    out.push_back({"n0 in a 3 m segment (informational)", true, num(s.n_mean0)});
  });
}

CriterionResult criterion_asymptotes(const SuiteOptions&) {
  return timed(4, "kernel asymptotes against the exact kernel", 10.0, [](std::vector<Check>& out) {
    const double a = 1e-5;
    const double k_hi = 20.0 / a;
    out.push_back(within_rel("high-ka form at k1 a = 20", energy_gain::f_exact(k_hi, 0.0, a).value,
                             energy_gain::f_high_ka(k_hi, 0.0, a), 0.005));
    const double k_lo = 0.02 / a;
    out.push_back(within_rel("low-ka photon form at k1 a = 0.02", energy_gain::f_exact(k_lo, 0.0, a).value,
                             energy_gain::f_low_ka_photon(k_lo, a), 0.02));
    const double k0 = 3.0 / a;
    const quad::GaussianWeight3D w{quad::Vec3(0, 0, k0), a};
    const auto q = quad::integrate_gaussian_3d([k0](const quad::Vec3& k) { return k.squaredNorm() - k0 * k0; }, w);
    out.push_back(within_rel("int d^3k (k^2 - k0^2) e^{-(k-k0)^2 a^2}", q.value,
                             std::pow(kPi, 1.5) / std::pow(a, 3) * 1.5 / (a * a), 1e-6));
  });
}

CriterionResult criterion_conservation(const SuiteOptions&) {
  return timed(5, "trace and energy conservation", 30.0, [](std::vector<Check>& out) {
    auto p = grw();
    p.lambda_rate = 1.0;
    const double t = 1e-6;
    const std::vector<std::pair<std::string, laser::LaserPulseSpec>> sets{
        {"CW", laser::LaserPulseSpec::from_wavelength(1e-4, 1e-2, units::photons_in_pulse(1e-2, 1e-4), 1.0)},
        {"Vulcan", vulcan()},
        {"microwave", laser::LaserPulseSpec::from_wavelength(1e-2, 10.0, 1e10, 1.0)}};
    for (const auto& [name, s] : sets) {
      const auto tc = laser::trace_check(s, p, t);
      const double r = std::abs(tc.residual) / tc.loss;
      out.push_back({"trace residual / loss, " + name, r <= 1e-3, num(r)});
    }
    units::CollapseParams lcls_p;
    lcls_p.lambda_bar_n = 1e-13;
    const std::vector<std::tuple<std::string, laser::LaserPulseSpec, units::CollapseParams>> energy_sets{
        {"CW", sets[0].second, grw()},
        {"Vulcan", vulcan(), grw()},
        {"LCLS", laser::LaserPulseSpec::from_wavelength(1e-8, 1e-4, 1e12, 1.0), lcls_p}};
    for (const auto& [name, s, pp] : energy_sets) {
      const auto e = laser::energy_balance_check(s, pp, 1.0);
      out.push_back({"energy balance mismatch, " + name, e.mismatch <= 1e-6, num(e.mismatch)});
    }
  });
}

CriterionResult criterion_four_envelope(const SuiteOptions& o) {
  return timed(6, "four-envelope integral and its cancellation", 60.0, [&o](std::vector<Check>& out) {
    const double a = 1.0, sigma = 100.0, k0 = 50.0;
    quad::MonteCarloOptions mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    const auto mcr = laser::appendixB_I_oracle(k0, sigma, a, mc, true);
    const double b4 = laser::appendixB_I(k0, sigma, a).value;
    const double z = std::abs(mcr.value - b4) / mcr.error_estimate;
    out.push_back({"Monte Carlo vs closed form, sigma/a = 100", z <= 3.0,
                   num(mcr.value) + " vs " + num(b4) + " (" + num(z) + " standard errors, " +
                       std::to_string(mc.samples) + " samples)"});
    auto radial = [&](double d) { return 4.0 * kPi * d * d * laser::residual_bracket(d, k0, sigma); };
    const double bracket = quad::integrate_radial(radial, 0.0, 20.0 / sigma, {1e-10}).value;
    const double cancel = std::abs(bracket + b4) / b4;
    out.push_back({"integrated residual bracket cancels the closed form", cancel <= 0.01,
                   num(bracket) + " + " + num(b4) + " (rel " + num(cancel) + ")"});
  });
}

CriterionResult criterion_superposition(const SuiteOptions& o) {
  return timed(7, "superposition integrals and decay monotonicity", 120.0, [&o](std::vector<Check>& out) {
    const auto p = grw();
    quad::MonteCarloOptions mc;
    mc.samples = o.samples;
    mc.seed = o.seed;
    for (double dsig : {0.0, 2.0}) {
      superposition::SuperpositionSpec s{1e3, 20.0 * p.a, 10.0 / p.a, 0.0, dsig * 20.0 * p.a};
      const auto c = superposition::integrals_closed(s, p);
      const auto m = superposition::integrals_oracle(s, p, mc);
      const std::string tag = dsig == 0.0 ? " (d = 0)" : " (d = 2 sigma)";
      auto add = [&](const std::string& name, const quad::IntegrationResult& r, double closed) {
        const double lim = std::max(3.0 * r.error_estimate, 0.05 * std::abs(closed));
        out.push_back({name + tag, std::abs(r.value - closed) <= lim,
                       num(r.value) + " vs " + num(closed) + " (diff " + num(std::abs(r.value - closed)) +
                           ", limit " + num(lim) + ")"});
      };
      if (dsig == 0.0) {
        add("I1", m.I1, c.I1);
        add("I2", m.I2, c.I2);
      }
      add("I3", m.I3, c.I3);
    }
    const double ts[] = {1e3, 1e6, 1e9};
    const double ds[] = {0.0, 2.0, 8.0};
    const double ns[] = {1.0, 1e3, 1e6};
    std::size_t violations = 0, comparisons = 0;
    for (int it = 0; it < 3; ++it)
      for (int id = 0; id < 3; ++id)
        for (int in = 0; in < 3; ++in) {
          superposition::SuperpositionSpec s{ns[in], 20.0 * p.a, 10.0 / p.a, 0.0, ds[id] * 20.0 * p.a};
          const double v = superposition::offdiag_decay(s, p, ts[it]).offdiag;
          auto probe = [&](superposition::SuperpositionSpec s2, double t2) {
            ++comparisons;
            if (superposition::offdiag_decay(s2, p, t2).offdiag > v) ++violations;
          };
          if (it < 2) probe(s, ts[it + 1]);
          if (id < 2) {
            auto s2 = s;
            s2.d = ds[id + 1] * 20.0 * p.a;
            probe(s2, ts[it]);
          }
          if (in < 2) {
            auto s2 = s;
            s2.N = ns[in + 1];
            probe(s2, ts[it]);
          }
          auto s3 = s;
          s3.k0 *= 2.0;
          probe(s3, ts[it]);
        }
    out.push_back({"off-diagonal non-increasing in t, d, N, k0 on a 3x3x3 grid", violations == 0,
                   std::to_string(violations) + " violations in " + std::to_string(comparisons) + " comparisons"});
  });
}

CriterionResult criterion_cosmology(const SuiteOptions&) {
  return timed(8, "blackbody distortion", 5.0, [](std::vector<Check>& out) {
    cosmology::CosmologyScenario s;
    auto unit = s;
    unit.params.lambda_rate = 1.0;
    out.push_back(within_rel("fractional loss at 0.1 cm ~ 0.6 lambda", cosmology::fractional_loss(0.1, unit), 0.6,
                             0.10));
    const auto v = cosmology::temperature_degeneracy(1.0, s);
    out.push_back(within_rel("lambda bound at 1 cm ~ 3e-3 s^-1", v.lambda_bound, 3e-3, 0.15));
    // Peak of the photon number per unit frequency: x = h nu / k T ~ 1.594.
    const double peak = s.thermal_wavelength() / 1.5936;
    const auto g = cosmology::gain_term(peak, s, s.t0);
    out.push_back({"loss/gain at the spectral peak in [1e14, 1e15]",
                   g.loss_gain_ratio >= 1e14 && g.loss_gain_ratio <= 1e15,
                   num(g.loss_gain_ratio) + " at " + num(peak) + " cm"});
  });
}

CriterionResult criterion_fock(const SuiteOptions& o) {
  return timed(9, "truncated Fock-space oracle", 300.0, [&o](std::vector<Check>& out) {
    units::CollapseParams p;
    p.lambda_rate = 1.0;
    p.a = 1.0;
    p.lambda_bar_n = 1.0;
    auto line = [](std::vector<double> kz, double M, double L) {
      fock::ModeGrid g;
      for (double k : kz) g.momenta.emplace_back(0.0, 0.0, k);
      g.M = M;
      g.L = L;
      return g;
    };
    const bool big = o.fock_dimension >= 1024;
    std::vector<double> kz{0.3, 0.8, 1.2, 1.9};
    std::vector<fock::Complex> alphas{{0.5, 0.0}, {0.0, 0.3}, {0.2, 0.2}, {0.1, 0.0}};
    if (big) {
      kz.push_back(2.4);
      alphas.emplace_back(0.0, 0.1);
    }
    fock::FockModel m(line(kz, 0.5, 2.0 * kPi), p, 3);
    m.hamiltonian_scale = 1.0;
    const auto s0 = fock::coherent_state(m, alphas);
    const double span = 1.0 / m.dissipator_norm_bound();
    const auto s1 = fock::evolve(s0, m, span, {.check = false});
    const auto o0 = fock::observables(s0, m), o1 = fock::observables(s1, m);
    const double tr = std::abs(o1.trace - fock::Complex(1.0, 0.0));
    const double dn = std::abs(o1.number - o0.number);
    const std::string dim = " (D = " + std::to_string(m.dimension()) + ", ||D|| t = 1)";
    out.push_back({"trace drift <= 1e-8" + dim, tr <= 1e-8, num(tr)});
    out.push_back({"number drift <= 1e-8" + dim, dn <= 1e-8, num(dn)});

    fock::FockModel m4(line({0.3, 0.8, 1.2, 1.9}, 0.5, 2.0 * kPi), p, 3);
    m4.hamiltonian_scale = 1.0;
    const std::vector<std::size_t> occ{2, 0, 1, 0};
    const std::vector<double> n0(occ.begin(), occ.end());
    const auto rates = fock::first_order_number_rates(m4, n0);
    const double t = 1e-3 / m4.dissipator_norm_bound();
    const auto on = fock::observables(fock::evolve(fock::number_state(m4, occ), m4, t), m4);
    double worst = 0.0;
    for (std::size_t i = 0; i < occ.size(); ++i) worst = std::max(worst, rel((on.occupancy[i] - n0[i]) / t, rates[i]));
    out.push_back({"first-order occupancy changes within 5%", worst <= 0.05, "worst rel " + num(worst)});

    auto decay = [&](double scale) {
      units::CollapseParams ps = p;
      ps.a = 1.0 / scale;
      fock::FockModel md(line({0.6 * scale, 1.3 * scale}, 0.4 * scale, 2.0 * kPi / scale), ps, 2);
      md.hamiltonian_scale = 1.0;
      Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(md.dimension()));
      const auto L = md.index_of({2, 0}), R = md.index_of({0, 2});
      psi[L] = psi[R] = 1.0;
      const auto a0 = fock::pure_state(md, psi);
      const double dt = 1e-4;
      const auto a1 = fock::evolve(a0, md, dt, {.steps = 20});
      return (std::abs(a0.rho(L, R)) - std::abs(a1.rho(L, R))) / dt;
    };
    const double ratio = decay(2.0) / decay(1.0);
    out.push_back({"coherence decay ratio on doubling mode energies = 4.0 +- 0.2", std::abs(ratio - 4.0) <= 0.2,
                   num(ratio)});
  });
}

CriterionResult criterion_commutator(const SuiteOptions&) {
  return timed(10, "commutator kernel", 10.0, [](std::vector<Check>& out) {
    using namespace superposition;
    const double M = 1.0;
    out.push_back(within_rel("closed kernel vs asymptote at Mr = 10", commutator_kernel(10.0, M),
                             commutator_kernel_asymptotic(10.0, M), 0.10));
    out.push_back(within_rel("closed kernel vs asymptote at Mr = 50", commutator_kernel(50.0, M),
                             commutator_kernel_asymptotic(50.0, M), 0.02));
    const auto q = commutator_kernel_regulated(1.0, M);
    out.push_back(within_rel("closed kernel vs regulated quadrature at Mr = 1", commutator_kernel(1.0, M), q.value,
                             0.01));
    out.push_back({"K2 form vs regulated quadrature at Mr = 1 (informational)", true,
                   num(commutator_kernel_fourier(1.0, M)) + " vs " + num(q.value)});
  });
}

const std::vector<CriterionFn>& criteria() {
  static const std::vector<CriterionFn> all{criterion_vulcan,        criterion_lcls,          criterion_cw,
                                            criterion_asymptotes,    criterion_conservation,  criterion_four_envelope,
                                            criterion_superposition, criterion_cosmology,     criterion_fock,
                                            criterion_commutator};
  return all;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& options, const std::vector<int>& ids) {
  std::vector<CriterionResult> out;
  const auto& all = criteria();
  for (int id = 1; id <= static_cast<int>(all.size()); ++id) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
    out.push_back(all[static_cast<std::size_t>(id - 1)](options));
  }
  for (int id : ids)
    if (id < 1 || id > static_cast<int>(all.size()))
      throw std::invalid_argument("no criterion " + std::to_string(id));
  return out;
}

std::string format(const CriterionResult& r, bool with_checks) {
  char head[256];
  std::snprintf(head, sizeof head, "%s  [%d] %s (%.2f s, limit %.0f s)", r.passed() ? "PASS" : "FAIL", r.id,
                r.title.c_str(), r.seconds, r.time_limit);
  std::string s = head;
  if (with_checks) {
    for (const auto& c : r.checks) s += std::string("\n      ") + (c.passed ? "ok   " : "FAIL ") + c.name + ": " + c.detail;
    if (!r.within_time()) s += "\n      FAIL time limit exceeded";
  }
  return s;
}

}  // namespace collapse::validation
