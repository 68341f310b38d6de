#pragma once

// Dispatches a parsed scenario to the computation modules and renders the
// result as CSV plus a short summary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "collapse/scenario_config.hpp"

namespace collapse::cli {

inline constexpr const char* kToolVersion = "collapse-photons 1.0.0";

struct RunOptions {
  std::optional<std::string> out;       // CSV path; overrides the config's `out`
  std::optional<std::uint64_t> seed;    // overrides the config's `seed`
  std::optional<double> tol;            // relative quadrature tolerance
  std::optional<std::size_t> samples;   // Monte-Carlo samples
  bool strict = false;                  // flagged results give a nonzero exit
};

struct ScenarioOutput {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  /// Validity problems and warnings; each makes a strict run fail.
  std::vector<std::string> flags;
  std::uint64_t seed = 0;
};

/// Runs the computation only; throws std::domain_error and friends for
/// inputs the modules reject.
ScenarioOutput run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// CSV text: '#' metadata (tool version, kind, seed, config echo), the
/// column header and the rows. Deterministic for a given config and seed.
std::string render_csv(const ScenarioConfig& config, const ScenarioOutput& output);

/// run_scenario, write the CSV (if an output path is set), print the summary.
/// Returns the process exit status: 0 on success, 1 for flagged results
/// under `strict`, 2 for computation or I/O errors.
int run(const ScenarioConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Formats a double with 10 significant digits.
std::string format_number(double v);

}  // namespace collapse::cli
