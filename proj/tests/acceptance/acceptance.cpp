// Runs the ten acceptance criteria and prints one PASS/FAIL line for each,
// followed by the individual checks. Exit status is nonzero if any fail.
//
//   acceptance [--quiet] [--only N[,N...]] [--samples N] [--seed N]

#include <CLI11.hpp>

#include <iostream>

#include "collapse/validation.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  collapse::validation::SuiteOptions opts;
  std::vector<int> only;
  bool quiet = false;
  app.add_option("--only", only, "criterion ids")->delimiter(',')->check(CLI::Range(1, 10));
  app.add_option("--samples", opts.samples, "Monte-Carlo samples");
  app.add_option("--seed", opts.seed, "random seed");
  app.add_flag("--quiet", quiet, "omit the per-check lines");
  CLI11_PARSE(app, argc, argv);

  const auto results = collapse::validation::run_suite(opts, only);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << collapse::validation::format(r, !quiet) << "\n" << std::flush;
    if (!r.passed()) ++failed;
  }
  std::cout << "\n" << results.size() - static_cast<std::size_t>(failed) << " of " << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
