// collapse-photons: command-line front end for the scenario runner.
//
//   collapse-photons <kind> --config FILE [--out CSV] [--seed N] [--tol X]
//                    [--samples N] [--strict]
//
// Exit status: 0 ok, 1 flagged result under --strict, 2 bad input or failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "collapse/scenario_config.hpp"
#include "collapse/scenario_runner.hpp"

namespace {

using namespace collapse::cli;

struct Invocation {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::size_t samples = 0;
  bool strict = false;
  bool list_keys = false;
};

int execute(ScenarioKind kind, const Invocation& inv, CLI::App& sub) {
  if (inv.list_keys) {
    for (const auto& line : describe_keys(kind)) std::cout << line << "\n";
    return 0;
  }
  std::string text;
  if (inv.config_path.empty()) {
    if (kind != ScenarioKind::validate) {
      std::cerr << "error: --config is required for " << to_string(kind) << "\n";
      return 2;
    }
    text = "[validate]\n";
  } else {
    std::ifstream f(inv.config_path);
    if (!f) {
      std::cerr << "error: cannot read '" << inv.config_path << "'\n";
      return 2;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  const auto parsed = parse_config(text);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << inv.config_path << ": " << e.to_string() << "\n";
    return 2;
  }
  if (parsed.config->kind != kind) {
    std::cerr << "error: config describes '" << to_string(parsed.config->kind) << "' but the subcommand is '"
              << to_string(kind) << "'\n";
    return 2;
  }
  RunOptions opts;
  opts.strict = inv.strict;
  if (sub.count("--out")) opts.out = inv.out;
  if (sub.count("--seed")) opts.seed = inv.seed;
  if (sub.count("--tol")) opts.tol = inv.tol;
  if (sub.count("--samples")) opts.samples = inv.samples;
  return run(*parsed.config, opts, std::cout, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon loss, heating and decoherence under mass-proportional collapse"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  Invocation inv;
  std::vector<std::pair<CLI::App*, ScenarioKind>> subs;
  for (auto kind : all_kinds()) {
    const std::string name(to_string(kind));
    auto* sub = app.add_subcommand(name, "run a " + name + " scenario");
    sub->add_option("-c,--config", inv.config_path, "scenario file")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", inv.out, "CSV output path");
    sub->add_option("--seed", inv.seed, "random seed");
    sub->add_option("--tol", inv.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", inv.samples, "Monte-Carlo samples")->check(CLI::Range(2ul, 1000000000ul));
    sub->add_flag("--strict", inv.strict, "exit 1 when any result is flagged");
    sub->add_flag("--list-keys", inv.list_keys, "print the accepted config keys and exit");
    subs.emplace_back(sub, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  for (auto& [sub, kind] : subs)
    if (sub->parsed()) return execute(kind, inv, *sub);
  return 2;
}
