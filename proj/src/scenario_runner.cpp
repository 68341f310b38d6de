#include "collapse/scenario_runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "collapse/cosmology.hpp"
#include "collapse/energy_gain.hpp"
#include "collapse/laser.hpp"
#include "collapse/lindblad_fock.hpp"
#include "collapse/superposition.hpp"
#include "collapse/units.hpp"
#include "collapse/validation.hpp"

namespace collapse::cli {

namespace {

using Row = std::vector<std::string>;

std::string flag01(bool b) { return b ? "1" : "0"; }

units::CollapseParams params_of(const ScenarioConfig& c) {
  units::CollapseParams p;
  p.lambda_rate = c.number_or("lambda_rate", p.lambda_rate);
  p.a = c.number_or("a", p.a);
  p.lambda_bar_n = c.number_or("lambda_bar", p.lambda_bar_n);
  p.validate();
  return p;
}

quad::Tolerance tolerance_of(const ScenarioConfig& c, const RunOptions& o, double fallback) {
  quad::Tolerance t;
  t.rel = o.tol.value_or(c.number_or("tol", fallback));
  return t;
}

std::size_t samples_of(const ScenarioConfig& c, const RunOptions& o, std::size_t fallback) {
  return o.samples.value_or(static_cast<std::size_t>(c.number_or("samples", static_cast<double>(fallback))));
}

std::size_t count_of(const ScenarioConfig& c, const std::string& key, std::size_t fallback) {
  return static_cast<std::size_t>(c.number_or(key, static_cast<double>(fallback)));
}

laser::LaserPulseSpec pulse_of(const ScenarioConfig& c, double t) {
  const double lambda0 = c.has("lambda0") ? c.number("lambda0") : units::kev_to_wavelength(c.number("photon_energy"));
  double n0 = 0.0;
  if (c.has("n0")) {
    n0 = c.number("n0");
  } else if (c.has("pulse_energy")) {
    n0 = units::photons_in_pulse(c.number("pulse_energy"), lambda0);
  } else {
    n0 = units::photons_in_pulse(units::beam_segment_energy(c.number("power"), c.number("length")), lambda0);
  }
  return laser::LaserPulseSpec::from_wavelength(lambda0, c.number("sigma"), n0, t);
}

ScenarioOutput energy_gain_run(const ScenarioConfig& c, const RunOptions& o) {
  using namespace energy_gain;
  ScenarioOutput out;
  const auto p = params_of(c);
  const auto tol = tolerance_of(c, o, 1e-8);
  const double mass = c.number_or("mass", 0.0);
  const double k1 = c.has("k1") ? c.number("k1") : units::wavelength_to_wavenumber(c.number("lambda1"));
  const std::size_t points = count_of(c, "points", 1);
  std::vector<double> ks{k1};
  if (points > 1) {
    if (!c.has("k1_max")) throw std::domain_error("points > 1 needs k1_max");
    if (!(k1 > 0.0) || c.number("k1_max") <= k1) throw std::domain_error("sweep needs 0 < k1 < k1_max");
    ks = quad::geometric_breakpoints(k1, c.number("k1_max"), points - 1);
  }
  const std::string label = c.text_or("regime", "all");
  std::vector<Regime> regimes;
  if (label == "all") {
    regimes = {Regime::exact, Regime::high_ka};
    regimes.push_back(mass == 0.0 ? Regime::low_ka : Regime::nonrel);
  } else {
    regimes = {parse_regime(label)};
  }
  out.columns = {"k1_cm_inv", "k1a", "mass_cm_inv", "regime", "kernel", "rate_cm_inv_per_s", "rate_j_per_s"};
  for (double k : ks) {
    for (auto r : regimes) {
      const auto g = energy_gain_rate(k, mass, p, r, tol);
      out.rows.push_back({format_number(k), format_number(k * p.a), format_number(mass), std::string(to_string(r)),
                          format_number(g.kernel), format_number(g.rate), format_number(g.rate_joule)});
      if (k == ks.front()) out.summary.emplace_back("rate_j_per_s (" + std::string(to_string(r)) + ")",
                                                     format_number(g.rate_joule));
      if (g.free_particle_only && k == ks.front())
        out.flags.push_back("massive relativistic rate ignores binding potentials");
    }
  }
  out.summary.emplace_back("k1a", format_number(k1 * p.a));
  return out;
}

ScenarioOutput laser_loss_run(const ScenarioConfig& c, const RunOptions& o) {
  using namespace laser;
  ScenarioOutput out;
  const auto p = params_of(c);
  const double t = c.number_or("t", 1.0);
  const auto spec = pulse_of(c, t);
  spec.validate();
  for (const auto& w : spec.warnings(p)) out.flags.push_back(w);
  const std::string label = c.text_or("regime", "all");
  std::vector<LossRegime> regimes;
  if (label == "all" || label == "low") regimes.push_back(LossRegime::low_k0a);
  if (label == "all" || label == "high") regimes.push_back(LossRegime::high_k0a);
  if (label == "all" || label == "exact") regimes.push_back(LossRegime::exact);
  const auto tol = tolerance_of(c, o, 1e-6);
  out.columns = {"regime", "k0a", "loss_coefficient", "n_mean_t", "loss_fraction", "first_order_valid"};
  out.summary.emplace_back("n_mean0", format_number(spec.n_mean0));
  out.summary.emplace_back("k0a", format_number(spec.k0 * p.a));
  for (auto r : regimes) {
    const auto res = mean_photons(spec, p, t, r, tol);
    out.rows.push_back({std::string(to_string(r)), format_number(res.k0a), format_number(res.loss_coefficient),
                        format_number(res.n_mean_t), format_number(res.loss_fraction),
                        flag01(res.first_order_valid)});
    out.summary.emplace_back("loss_coefficient (" + std::string(to_string(r)) + ")",
                             format_number(res.loss_coefficient));
    if (!res.first_order_valid) out.flags.push_back(std::string(to_string(r)) + ": loss fraction above 0.5");
  }
  return out;
}

ScenarioOutput excitation_run(const ScenarioConfig& c, const RunOptions&) {
  using namespace laser;
  ScenarioOutput out;
  const auto p = params_of(c);
  const double t = c.number_or("t", 1.0);
  const auto spec = pulse_of(c, t);
  spec.validate();
  for (const auto& w : spec.warnings(p)) out.flags.push_back(w);
  const auto grid = default_excitation_grid(spec.k0, p.a, count_of(c, "points", 512));
  const auto sp = excitation_spectrum(grid, spec, p, t);
  out.columns = {"k_cm_inv", "P_per_d3k", "cumulative_fraction"};
  for (std::size_t i = 0; i < sp.k.size(); ++i)
    out.rows.push_back({format_number(sp.k[i]), format_number(sp.density[i]), format_number(sp.cumulative_fraction[i])});
  const auto rate = total_excitation_rate(spec, p, t);
  out.summary = {{"n_mean0", format_number(spec.n_mean0)},
                 {"k0a", format_number(rate.k0a)},
                 {"gamma_per_s", format_number(rate.gamma)},
                 {"gamma_n0_per_s", format_number(rate.gamma_n0)},
                 {"expected_count", format_number(rate.expected_count)},
                 {"spectrum_total", format_number(sp.total)}};
  if (!rate.small_k0a) out.flags.push_back("k0 a is not small; the closed-form rate is only indicative");
  return out;
}

ScenarioOutput cosmology_run(const ScenarioConfig& c, const RunOptions&) {
  using namespace cosmology;
  ScenarioOutput out;
  CosmologyScenario s;
  s.params = params_of(c);
  s.T0 = c.number_or("T0", s.T0);
  s.t0 = c.number_or("t0", s.t0);
  s.Z0 = c.number_or("Z0", s.Z0);
  s.delta = c.number_or("delta", s.delta);
  s.validate();
  const double lo = c.number_or("lambda_min", 0.05), hi = c.number_or("lambda_max", 50.0);
  if (!(hi > lo)) throw std::domain_error("lambda_max must exceed lambda_min");
  auto grid = quad::geometric_breakpoints(lo, hi, count_of(c, "points", 200) - 1);
  for (double anchor : {0.1, 1.0})
    if (anchor > lo && anchor < hi && std::find(grid.begin(), grid.end(), anchor) == grid.end()) grid.push_back(anchor);
  std::sort(grid.begin(), grid.end());
  out.columns = {"lambda0_cm", "planck_occupancy", "distorted_occupancy", "fractional_loss", "validity_flag"};
  std::size_t invalid = 0;
  for (const auto& pt : distorted_spectrum(grid, s)) {
    const bool ok = pt.kernel_approx_valid && pt.first_order_valid;
    if (!pt.first_order_valid) ++invalid;
    out.rows.push_back({format_number(pt.lambda0), format_number(pt.planck_occupancy),
                        format_number(pt.distorted_occupancy), format_number(pt.fractional_loss), flag01(ok)});
  }
  auto unit = s;
  unit.params.lambda_rate = 1.0;
  const auto v = temperature_degeneracy(1.0, s);
  const double peak = s.thermal_wavelength() / 1.5936;
  const auto g = gain_term(peak, s, s.t0);
  out.summary = {{"thermal_wavelength_cm", format_number(s.thermal_wavelength())},
                 {"fractional_loss_per_lambda_at_0.1cm", format_number(fractional_loss(0.1, unit))},
                 {"lambda_bound_at_1cm_per_s", v.has_bound ? format_number(v.lambda_bound) : "none"},
                 {"degeneracy_regime_at_1cm", std::string(to_string(v.regime))},
                 {"loss_gain_ratio_at_peak", format_number(g.loss_gain_ratio)}};
  if (invalid > 0) out.flags.push_back(std::to_string(invalid) + " wavelengths with fractional loss >= 1");
  return out;
}

ScenarioOutput superposition_run(const ScenarioConfig& c, const RunOptions& o, std::uint64_t seed) {
  using namespace superposition;
  ScenarioOutput out;
  out.seed = seed;
  const auto p = params_of(c);
  SuperpositionSpec s;
  s.N = c.number("N");
  s.sigma = c.number("sigma");
  s.k0 = c.has("k0") ? c.number("k0") : c.number("k0a") / p.a;
  s.M = c.number_or("M", 0.0);
  s.d = c.number("d");
  s.validate(p);
  for (const auto& w : s.warnings()) out.flags.push_back(w);
  const double t = c.number("t");
  const std::size_t points = count_of(c, "points", 11);
  out.columns = {"t_s", "offdiag", "offdiag_full", "decay", "bracket", "first_order_valid"};
  bool valid = true;
  for (std::size_t i = 0; i < points; ++i) {
    const double ti = t * static_cast<double>(i) / static_cast<double>(points - 1);
    const auto r = offdiag_decay(s, p, ti);
    valid = valid && r.first_order_valid;
    out.rows.push_back({format_number(ti), format_number(r.offdiag), format_number(r.offdiag_full),
                        format_number(r.decay), format_number(r.bracket), flag01(r.first_order_valid)});
  }
  const auto I = integrals_closed(s, p);
  out.summary = {{"k0a", format_number(s.k0 * p.a)},
                 {"overlap", format_number(s.overlap())},
                 {"I1", format_number(I.I1)},
                 {"I2", format_number(I.I2)},
                 {"I3", format_number(I.I3)},
                 {"offdiag_at_t", format_number(offdiag_decay(s, p, t).offdiag)}};
  if (c.number_or("oracle", 0.0) != 0.0) {
    quad::MonteCarloOptions mc;
    mc.samples = samples_of(c, o, 200'000);
    mc.seed = out.seed;
    const auto m = integrals_oracle(s, p, mc);
    auto pm = [](const quad::IntegrationResult& r) {
      return format_number(r.value) + " +- " + format_number(r.error_estimate);
    };
    out.summary.emplace_back("I1_monte_carlo", pm(m.I1));
    out.summary.emplace_back("I2_monte_carlo", pm(m.I2));
    out.summary.emplace_back("I3_monte_carlo", pm(m.I3));
  }
  if (!valid) out.flags.push_back("decay exceeds 1/2 before t: first order no longer applies");
  return out;
}

std::vector<std::size_t> occupations_of(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (double x : v) {
    if (x < 0.0 || std::floor(x) != x) throw std::domain_error("occupations must be non-negative integers");
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

ScenarioOutput fock_run(const ScenarioConfig& c, const RunOptions&) {
  using namespace fock;
  ScenarioOutput out;
  const auto p = params_of(c);
  ModeGrid g;
  for (double kz : c.list("modes")) g.momenta.emplace_back(0.0, 0.0, kz);
  g.M = c.number_or("M", 0.0);
  g.L = c.number("L");
  FockModel m(g, p, count_of(c, "n_max", 3));
  m.hamiltonian_scale = c.number_or("hamiltonian_scale", units::kSpeedOfLight);
  const std::string init = c.text_or("initial", "vacuum");
  DensityState s0;
  if (init == "vacuum") {
    s0 = vacuum(m);
  } else if (init == "number") {
    s0 = number_state(m, occupations_of(c.list("occupations")));
  } else if (init == "coherent") {
    std::vector<Complex> alphas;
    for (double x : c.list("alphas")) alphas.emplace_back(x, 0.0);
    s0 = coherent_state(m, alphas);
  } else {
    s0 = thermal_state(m, c.number("beta"));
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (c.has("coherence_from"))
    pairs.emplace_back(m.index_of(occupations_of(c.list("coherence_from"))),
                       m.index_of(occupations_of(c.list("coherence_to"))));
  const double t = c.number("t");
  const auto series = evolve_series(s0, m, t, count_of(c, "points", 20), pairs);
  out.columns = {"t_s", "trace", "number", "energy_cm_inv"};
  for (std::size_t i = 0; i < m.modes(); ++i) out.columns.push_back("n_" + std::to_string(i));
  if (!pairs.empty()) out.columns.push_back("coherence");
  out.columns.push_back("top_layer");
  double worst_top = 0.0;
  for (const auto& smp : series) {
    Row r{format_number(smp.t), format_number(smp.obs.trace.real()), format_number(smp.obs.number),
          format_number(smp.obs.energy)};
    for (double n : smp.obs.occupancy) r.push_back(format_number(n));
    for (double x : smp.obs.coherences) r.push_back(format_number(x));
    r.push_back(format_number(smp.obs.top_layer));
    worst_top = std::max(worst_top, smp.obs.top_layer);
    out.rows.push_back(std::move(r));
  }
  const auto& first = series.front().obs;
  const auto& last = series.back().obs;
  out.summary = {{"dimension", std::to_string(m.dimension())},
                 {"c0", format_number(m.c0())},
                 {"dissipator_norm_bound_per_s", format_number(m.dissipator_norm_bound())},
                 {"trace_drift", format_number(std::abs(last.trace - Complex(1.0, 0.0)))},
                 {"number_drift", format_number(std::abs(last.number - first.number))},
                 {"energy_change_cm_inv", format_number(last.energy - first.energy)},
                 {"max_top_layer", format_number(worst_top)}};
  if (worst_top >= 1e-6) out.flags.push_back("top Fock layer occupied above 1e-6: raise n_max");
  return out;
}

ScenarioOutput validate_run(const ScenarioConfig& c, const RunOptions& o, std::uint64_t seed) {
  ScenarioOutput out;
  out.seed = seed;
  validation::SuiteOptions so;
  so.samples = samples_of(c, o, so.samples);
  so.seed = out.seed;
  const auto results = validation::run_suite(so);
  out.columns = {"criterion", "title", "passed", "seconds"};
  std::size_t passed = 0;
  for (const auto& r : results) {
    out.rows.push_back({std::to_string(r.id), r.title, flag01(r.passed()), format_number(r.seconds)});
    out.summary.emplace_back("criterion " + std::to_string(r.id), validation::format(r, false));
    if (r.passed())
      ++passed;
    else
      out.flags.push_back("criterion " + std::to_string(r.id) + " failed");
  }
  out.summary.emplace_back("passed", std::to_string(passed) + " of " + std::to_string(results.size()));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ScenarioOutput run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  const auto seed = options.seed.value_or(static_cast<std::uint64_t>(config.number_or("seed", 20240611.0)));
  ScenarioConfig c = config;
  c.values["seed"] = ConfigValue{std::to_string(seed), {static_cast<double>(seed)}, 0};
  ScenarioOutput out;
  switch (config.kind) {
    case ScenarioKind::energy_gain: out = energy_gain_run(c, options); break;
    case ScenarioKind::laser_loss: out = laser_loss_run(c, options); break;
    case ScenarioKind::excitation: out = excitation_run(c, options); break;
    case ScenarioKind::cosmology: out = cosmology_run(c, options); break;
    case ScenarioKind::superposition: out = superposition_run(c, options, seed); break;
    case ScenarioKind::fock_sim: out = fock_run(c, options); break;
    case ScenarioKind::validate: out = validate_run(c, options, seed); break;
  }
  out.seed = seed;
  return out;
}

std::string render_csv(const ScenarioConfig& config, const ScenarioOutput& output) {
  std::ostringstream s;
  s << "# " << kToolVersion << "\n";
  s << "# kind = " << to_string(config.kind) << "\n";
  s << "# seed = " << output.seed << "\n";
  for (const auto& [k, v] : config.echo) s << "# config: " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < output.columns.size(); ++i) s << (i ? "," : "") << csv_field(output.columns[i]);
  s << "\n";
  for (const auto& row : output.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << csv_field(row[i]);
    s << "\n";
  }
  return s.str();
}

int run(const ScenarioConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  ScenarioOutput result;
  try {
    result = run_scenario(config, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto path = options.out ? options.out : (config.has("out") ? std::optional(config.text_or("out", "")) : std::nullopt);
  if (path) {
    std::ofstream f(*path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << *path << "'\n";
      return 2;
    }
    f << render_csv(config, result);
    if (!f) {
      err << "error: write to '" << *path << "' failed\n";
      return 2;
    }
  }
  out << "[" << to_string(config.kind) << "]\n";
  for (const auto& [k, v] : result.summary) out << k << ": " << v << "\n";
  if (path) out << "csv: " << *path << " (" << result.rows.size() << " rows)\n";
  for (const auto& f : result.flags) out << "flag: " << f << "\n";
  if (options.strict && !result.flags.empty()) {
    err << "strict: " << result.flags.size() << " flagged result(s)\n";
    return 1;
  }
  return 0;
}

}  // namespace collapse::cli
