#include <algorithm>
#include <sstream>
#include <string>

#include "doctest.h"

#include "collapse/scenario_config.hpp"
#include "collapse/scenario_runner.hpp"

using namespace collapse::cli;

namespace {

const char* kVulcan =
    "# petawatt pulse\n"
    "[laser-loss]\n"
    "lambda0_nm = 1053\n"
    "sigma_mm = 0.1\n"
    "n0 = 2.5e21\n"
    "t_s = 1\n";

bool has_error(const ParseResult& r, std::size_t line, const std::string& fragment) {
  return std::any_of(r.errors.begin(), r.errors.end(), [&](const ConfigError& e) {
    return e.line == line && e.message.find(fragment) != std::string::npos;
  });
}

std::string summary_value(const ScenarioOutput& o, const std::string& key) {
  for (const auto& [k, v] : o.summary)
    if (k == key) return v;
  return {};
}

}  // namespace

TEST_CASE("minimal laser config parses with converted units") {
  const auto r = parse_config(kVulcan);
  REQUIRE(r.ok());
  const auto& c = *r.config;
  CHECK(c.kind == ScenarioKind::laser_loss);
  CHECK(c.number("lambda0") == doctest::Approx(1.053e-4));
  CHECK(c.number("sigma") == doctest::Approx(1e-2));
  CHECK(c.number("n0") == 2.5e21);
  CHECK(c.echo.size() == 4);
}

TEST_CASE("kind labels round trip") {
  for (auto k : all_kinds()) CHECK(parse_kind(to_string(k)) == k);
  CHECK_FALSE(parse_kind("laser").has_value());
}

TEST_CASE("empty file reports a missing kind") {
  const auto r = parse_config("");
  CHECK_FALSE(r.ok());
  REQUIRE_FALSE(r.errors.empty());
  CHECK(r.errors.front().message.find("missing scenario kind") != std::string::npos);
}

TEST_CASE("negative collapse rate is rejected with its line") {
  const auto r = parse_config(std::string(kVulcan) + "lambda_rate = -1\n");
  CHECK_FALSE(r.ok());
  CHECK(has_error(r, 7, "lambda_rate must be ≥ 0"));
  CHECK(has_error(r, 7, "lambda_rate"));
}

TEST_CASE("unit mismatch and unknown keys carry line numbers") {
  const std::string text =
      "[laser-loss]\n"
      "lambda0_K = 1053\n"
      "sigma_mm = 0.1\n"
      "n0 = 2.5e21\n"
      "wavelength_nm = 3\n";
  const auto r = parse_config(text);
  CHECK_FALSE(r.ok());
  CHECK(has_error(r, 2, "lambda0"));
  CHECK(has_error(r, 5, "wavelength"));
}

TEST_CASE("every problem is reported in one pass") {
  const std::string text =
      "[cosmology]\n"
      "T0_K = -3\n"
      "nonsense\n"
      "points = 2.5\n"
      "Z0 = 1100\n"
      "Z0 = 1000\n";
  const auto r = parse_config(text);
  CHECK_FALSE(r.ok());
  CHECK(r.errors.size() >= 4);
  CHECK(has_error(r, 2, "T0"));
  CHECK(has_error(r, 3, ""));
  CHECK(has_error(r, 4, "points"));
  CHECK(has_error(r, 6, "Z0"));
}

TEST_CASE("required groups and conflicts") {
  auto r = parse_config("[laser-loss]\nsigma_cm = 1\nn0 = 1\n");
  CHECK_FALSE(r.ok());
  CHECK(has_error(r, 0, "lambda0"));
  r = parse_config("[laser-loss]\nlambda0_cm = 1e-4\nphoton_energy_keV = 1\nsigma_cm = 1\nn0 = 1\n");
  CHECK_FALSE(r.ok());
  r = parse_config("[validate]\n[laser-loss]\n");
  CHECK_FALSE(r.ok());
  CHECK(has_error(r, 2, "second section header"));
  CHECK_THROWS_AS((void)parse_config_or_throw("[bogus]\n"), ConfigParseError);
}

TEST_CASE("laser run: low-k0a coefficient and flags") {
  const auto c = parse_config_or_throw(kVulcan);
  const auto out = run_scenario(c);
  REQUIRE(out.rows.size() == 3);
  CHECK(std::stod(summary_value(out, "loss_coefficient (low_k0a)")) == doctest::Approx(0.75e4).epsilon(0.05));
  CHECK(std::stod(summary_value(out, "k0a")) == doctest::Approx(0.5967).epsilon(1e-3));
  // k0 sigma ~ 600 sits below the plane-wave threshold.
  CHECK_FALSE(out.flags.empty());
}

TEST_CASE("csv output is byte-identical across runs") {
  const auto c = parse_config_or_throw(
      "[superposition]\nN = 1000\nsigma_um = 2\nk0a = 10\nd_um = 4\nt_s = 1e12\noracle = 1\nsamples = 100000\nseed = 7\n");
  const auto a = render_csv(c, run_scenario(c));
  const auto b = render_csv(c, run_scenario(c));
  CHECK(a == b);
  CHECK(a.find("# seed = 7") != std::string::npos);
  RunOptions other;
  other.seed = 8;
  const auto o1 = run_scenario(c, {});
  const auto o2 = run_scenario(c, other);
  CHECK(summary_value(o1, "I1_monte_carlo") != summary_value(o2, "I1_monte_carlo"));
  CHECK(summary_value(o1, "I1") == summary_value(o2, "I1"));
}

TEST_CASE("cosmology run: loss at 0.1 cm") {
  const auto c = parse_config_or_throw("[cosmology]\n");
  const auto out = run_scenario(c);
  const double per_lambda = std::stod(summary_value(out, "fractional_loss_per_lambda_at_0.1cm"));
  CHECK(per_lambda == doctest::Approx(0.6).epsilon(0.1));
  bool anchored = false;
  for (const auto& row : out.rows) anchored = anchored || row[0] == "0.1";
  CHECK(anchored);
}

TEST_CASE("run exit codes") {
  std::ostringstream o, e;
  auto c = parse_config_or_throw(kVulcan);
  RunOptions strict;
  strict.strict = true;
  CHECK(run(c, {}, o, e) == 0);
  CHECK(run(c, strict, o, e) == 1);
  RunOptions bad;
  bad.out = "/nonexistent-dir/x.csv";
  CHECK(run(c, bad, o, e) == 2);
  c.values["sigma"].numbers = {-1.0};
  CHECK(run(c, {}, o, e) == 2);
}

TEST_CASE("fock run: drifts stay at rounding level") {
  const auto c = parse_config_or_throw(
      "[fock-sim]\nlambda_rate = 1\na_cm = 1\nlambda_bar_cm = 1\nlambda_bar_override = 1\n"
      "modes_cm_inv = 1, 2\nL_cm = 6.283185307179586\nn_max = 3\ninitial = number\noccupations = 1, 0\n"
      "t_s = 1\npoints = 4\nhamiltonian_scale = 1\n");
  const auto out = run_scenario(c);
  CHECK(out.rows.size() == 5);
  CHECK(std::stod(summary_value(out, "trace_drift")) < 1e-12);
  CHECK(std::stod(summary_value(out, "number_drift")) < 1e-12);
  CHECK(std::stod(summary_value(out, "energy_change_cm_inv")) > 0.0);
}
