#pragma once

// Cross-checks of every closed form against its independent path, grouped
// into the ten numbered acceptance criteria.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace collapse::validation {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double time_limit = 0.0;  // s
  [[nodiscard]] bool within_time() const { return seconds < time_limit; }
  /// Every check passes and the run finished inside the time limit.
  [[nodiscard]] bool passed() const;
};

struct SuiteOptions {
  std::size_t samples = 1'000'000;  // Monte-Carlo samples for criteria 6 and 7
  std::uint64_t seed = 20240611;
  /// Largest Fock dimension used by criterion 9 (256 or 1024).
  std::size_t fock_dimension = 1024;
};

using CriterionFn = std::function<CriterionResult(const SuiteOptions&)>;

CriterionResult criterion_vulcan(const SuiteOptions& o);
CriterionResult criterion_lcls(const SuiteOptions& o);
CriterionResult criterion_cw(const SuiteOptions& o);
CriterionResult criterion_asymptotes(const SuiteOptions& o);
CriterionResult criterion_conservation(const SuiteOptions& o);
CriterionResult criterion_four_envelope(const SuiteOptions& o);
CriterionResult criterion_superposition(const SuiteOptions& o);
CriterionResult criterion_cosmology(const SuiteOptions& o);
CriterionResult criterion_fock(const SuiteOptions& o);
CriterionResult criterion_commutator(const SuiteOptions& o);

/// Criteria 1..10 in order.
const std::vector<CriterionFn>& criteria();

/// Runs the listed criteria (all when `ids` is empty). Exceptions inside a
/// criterion are reported as a failed check rather than propagated.
std::vector<CriterionResult> run_suite(const SuiteOptions& options, const std::vector<int>& ids = {});

/// "PASS|FAIL  [n] title (x.xx s)" followed by one indented line per check.
std::string format(const CriterionResult& r, bool with_checks = true);

}  // namespace collapse::validation
