#include "collapse/scenario_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "collapse/units.hpp"

namespace collapse::cli {

namespace {

enum class Dim { none, length, wavenumber, time, energy, temperature, power, photon_energy };
enum class Type { number, integer, list, text, flag };
enum class Bound { any, nonneg, positive, at_least_one, at_least_two };

struct KeySpec {
  std::string stem;
  Dim dim = Dim::none;
  Type type = Type::number;
  Bound bound = Bound::any;
  bool required = false;
  std::string group;  // exactly one key of a required group must be present
  std::string help;
  std::vector<std::string> choices;  // text keys only
};

struct UnitFactor {
  std::string suffix;
  double factor;
};

const std::vector<UnitFactor>& units_of(Dim d) {
  static const std::map<Dim, std::vector<UnitFactor>> table{
      {Dim::none, {}},
      {Dim::length, {{"cm", 1.0}, {"mm", 0.1}, {"um", 1e-4}, {"nm", 1e-7}, {"m", 100.0}}},
      {Dim::wavenumber, {{"cm_inv", 1.0}, {"m_inv", 0.01}}},
      {Dim::time, {{"s", 1.0}, {"yr", units::kSecondsPerYear}}},
      {Dim::energy, {{"J", 1.0}, {"j", 1.0}}},
      {Dim::temperature, {{"K", 1.0}}},
      {Dim::power, {{"W", 1.0}, {"w", 1.0}}},
      {Dim::photon_energy, {{"keV", 1.0}, {"kev", 1.0}, {"eV", 1e-3}, {"ev", 1e-3}}},
  };
  return table.at(d);
}

std::vector<KeySpec> common_keys() {
  return {
      {"lambda_rate", Dim::none, Type::number, Bound::nonneg, false, "", "collapse rate, s^-1 (default 1e-16)", {}},
      {"a", Dim::length, Type::number, Bound::positive, false, "", "collapse length (default 1e-5 cm)", {}},
      {"lambda_bar", Dim::length, Type::number, Bound::positive, false, "",
       "nucleon reduced Compton wavelength (default 2.1e-14 cm)", {}},
      {"lambda_bar_override", Dim::none, Type::flag, Bound::any, false, "",
       "accept lambda_bar outside [1.9e-14, 2.2e-14] cm", {}},
      {"seed", Dim::none, Type::integer, Bound::nonneg, false, "", "Monte-Carlo seed", {}},
      {"tol", Dim::none, Type::number, Bound::positive, false, "", "relative quadrature tolerance", {}},
      {"samples", Dim::none, Type::integer, Bound::at_least_two, false, "", "Monte-Carlo samples", {}},
      {"out", Dim::none, Type::text, Bound::any, false, "", "CSV output path", {}},
  };
}

std::vector<KeySpec> kind_keys(ScenarioKind kind) {
  using K = ScenarioKind;
  std::vector<KeySpec> v = common_keys();
  auto add = [&v](std::vector<KeySpec> extra) { v.insert(v.end(), extra.begin(), extra.end()); };
  const KeySpec pulse_wavelength{"lambda0", Dim::length, Type::number, Bound::positive, false, "carrier",
                                 "carrier wavelength", {}};
  const KeySpec pulse_photon{"photon_energy", Dim::photon_energy, Type::number, Bound::positive, false, "carrier",
                             "photon energy (instead of lambda0)", {}};
  const KeySpec pulse_sigma{"sigma", Dim::length, Type::number, Bound::positive, true, "", "pulse length", {}};
  const KeySpec pulse_n0{"n0", Dim::none, Type::number, Bound::positive, false, "photons", "mean photon number", {}};
  const KeySpec pulse_energy{"pulse_energy", Dim::energy, Type::number, Bound::positive, false, "photons",
                             "pulse energy (instead of n0)", {}};
  switch (kind) {
    case K::energy_gain:
      add({{"k1", Dim::wavenumber, Type::number, Bound::nonneg, false, "momentum", "particle momentum", {}},
           {"lambda1", Dim::length, Type::number, Bound::positive, false, "momentum", "photon wavelength", {}},
           {"mass", Dim::wavenumber, Type::number, Bound::nonneg, false, "", "mass as inverse length (default 0)", {}},
           {"k1_max", Dim::wavenumber, Type::number, Bound::positive, false, "", "upper end of a log sweep", {}},
           {"points", Dim::none, Type::integer, Bound::at_least_one, false, "", "sweep points (default 1)", {}},
           {"regime", Dim::none, Type::text, Bound::any, false, "", "kernel form (default all)",
            {"all", "exact", "low_ka", "high_ka", "nonrel"}}});
      break;
    case K::laser_loss:
      add({pulse_wavelength, pulse_photon, pulse_sigma, pulse_n0, pulse_energy,
           {"t", Dim::time, Type::number, Bound::nonneg, false, "", "elapsed time (default 1 s)", {}},
           {"regime", Dim::none, Type::text, Bound::any, false, "", "loss form (default all)",
            {"all", "low", "high", "exact"}}});
      break;
    case K::excitation:
      add({pulse_wavelength, pulse_photon, pulse_sigma, pulse_n0, pulse_energy,
           {"power", Dim::power, Type::number, Bound::positive, false, "photons", "CW power (with length)", {}},
           {"length", Dim::length, Type::number, Bound::positive, false, "", "CW beam segment length", {}},
           {"t", Dim::time, Type::number, Bound::nonneg, false, "", "elapsed time (default 1 s)", {}},
           {"points", Dim::none, Type::integer, Bound::at_least_two, false, "", "spectrum grid points (default 512)",
            {}}});
      break;
    case K::cosmology:
      add({{"T0", Dim::temperature, Type::number, Bound::positive, false, "", "present temperature", {}},
           {"t0", Dim::time, Type::number, Bound::positive, false, "", "time since recombination", {}},
           {"Z0", Dim::none, Type::number, Bound::nonneg, false, "", "redshift at recombination", {}},
           {"delta", Dim::none, Type::number, Bound::positive, false, "", "relative temperature uncertainty", {}},
           {"lambda_min", Dim::length, Type::number, Bound::positive, false, "", "shortest wavelength", {}},
           {"lambda_max", Dim::length, Type::number, Bound::positive, false, "", "longest wavelength", {}},
           {"points", Dim::none, Type::integer, Bound::at_least_two, false, "", "grid points (default 200)", {}}});
      break;
    case K::superposition:
      add({{"N", Dim::none, Type::number, Bound::at_least_one, true, "", "particles per packet", {}},
           {"sigma", Dim::length, Type::number, Bound::positive, true, "", "packet width", {}},
           {"k0", Dim::wavenumber, Type::number, Bound::positive, false, "momentum", "packet momentum", {}},
           {"k0a", Dim::none, Type::number, Bound::positive, false, "momentum", "packet momentum times a", {}},
           {"M", Dim::wavenumber, Type::number, Bound::nonneg, false, "", "particle mass (default 0)", {}},
           {"d", Dim::length, Type::number, Bound::nonneg, true, "", "packet separation", {}},
           {"t", Dim::time, Type::number, Bound::nonneg, true, "", "final time", {}},
           {"points", Dim::none, Type::integer, Bound::at_least_two, false, "", "time points (default 11)", {}},
           {"oracle", Dim::none, Type::flag, Bound::any, false, "", "also run the Monte-Carlo integrals", {}}});
      break;
    case K::fock_sim:
      add({{"modes", Dim::wavenumber, Type::list, Bound::any, true, "", "mode momenta along z", {}},
           {"M", Dim::wavenumber, Type::number, Bound::nonneg, false, "", "field mass (default 0)", {}},
           {"L", Dim::length, Type::number, Bound::positive, true, "", "box side", {}},
           {"n_max", Dim::none, Type::integer, Bound::at_least_one, false, "", "Fock truncation (default 3)", {}},
           {"initial", Dim::none, Type::text, Bound::any, true, "", "initial state",
            {"vacuum", "number", "coherent", "thermal"}},
           {"occupations", Dim::none, Type::list, Bound::nonneg, false, "", "per-mode occupations (number)", {}},
           {"alphas", Dim::none, Type::list, Bound::any, false, "", "real coherent amplitudes (coherent)", {}},
           {"beta", Dim::length, Type::number, Bound::positive, false, "", "inverse temperature (thermal)", {}},
           {"t", Dim::time, Type::number, Bound::nonneg, true, "", "final time", {}},
           {"points", Dim::none, Type::integer, Bound::at_least_one, false, "", "output intervals (default 20)", {}},
           {"hamiltonian_scale", Dim::none, Type::number, Bound::nonneg, false, "",
            "s^-1 per cm^-1 of mode energy (default c)", {}},
           {"coherence_from", Dim::none, Type::list, Bound::nonneg, false, "", "occupations of a coherence row", {}},
           {"coherence_to", Dim::none, Type::list, Bound::nonneg, false, "", "occupations of a coherence column",
            {}}});
      break;
    case K::validate:
      break;
  }
  return v;
}

std::vector<std::string> required_groups(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::energy_gain: return {"momentum"};
    case ScenarioKind::laser_loss:
    case ScenarioKind::excitation: return {"carrier", "photons"};
    case ScenarioKind::superposition: return {"momentum"};
    default: return {};
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string unit_list(Dim d) {
  std::string out;
  for (const auto& u : units_of(d)) out += (out.empty() ? "" : "|") + u.suffix;
  return out;
}

std::string spelled(const KeySpec& k) {
  return k.dim == Dim::none ? k.stem : k.stem + "_" + units_of(k.dim).front().suffix;
}

std::string bound_text(Bound b) {
  switch (b) {
    case Bound::nonneg: return "≥ 0";
    case Bound::positive: return "> 0";
    case Bound::at_least_one: return "≥ 1";
    case Bound::at_least_two: return "≥ 2";
    default: return "";
  }
}

bool within(Bound b, double v) {
  switch (b) {
    case Bound::nonneg: return v >= 0.0;
    case Bound::positive: return v > 0.0;
    case Bound::at_least_one: return v >= 1.0;
    case Bound::at_least_two: return v >= 2.0;
    default: return true;
  }
}

struct KeyMatch {
  const KeySpec* spec = nullptr;
  double factor = 1.0;
  std::string unit_error;
};

KeyMatch match_key(const std::string& key, const std::vector<KeySpec>& specs) {
  KeyMatch best;
  std::size_t best_len = 0;
  for (const auto& s : specs) {
    if (key == s.stem) {
      if (s.dim == Dim::none) return {&s, 1.0, ""};
      if (s.stem.size() >= best_len) {
        best = {&s, 1.0, "unit mismatch: '" + key + "' needs a unit suffix (" + unit_list(s.dim) + ")"};
        best_len = s.stem.size();
      }
      continue;
    }
    if (key.size() <= s.stem.size() + 1 || key.compare(0, s.stem.size(), s.stem) != 0 || key[s.stem.size()] != '_')
      continue;
    if (s.stem.size() < best_len) continue;
    const std::string suffix = key.substr(s.stem.size() + 1);
    const auto& us = units_of(s.dim);
    const auto it = std::find_if(us.begin(), us.end(), [&](const UnitFactor& u) { return u.suffix == suffix; });
    if (it != us.end()) {
      best = {&s, it->factor, ""};
    } else {
      const std::string allowed = s.dim == Dim::none ? "no unit" : unit_list(s.dim);
      best = {&s, 1.0, "unit mismatch: '" + key + "' (" + s.stem + " takes " + allowed + ")"};
    }
    best_len = s.stem.size();
  }
  return best;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::energy_gain: return "energy-gain";
    case ScenarioKind::laser_loss: return "laser-loss";
    case ScenarioKind::excitation: return "excitation";
    case ScenarioKind::cosmology: return "cosmology";
    case ScenarioKind::superposition: return "superposition";
    case ScenarioKind::fock_sim: return "fock-sim";
    case ScenarioKind::validate: return "validate";
  }
  return "?";
}

const std::vector<ScenarioKind>& all_kinds() {
  static const std::vector<ScenarioKind> kinds{ScenarioKind::energy_gain, ScenarioKind::laser_loss,
                                               ScenarioKind::excitation,  ScenarioKind::cosmology,
                                               ScenarioKind::superposition, ScenarioKind::fock_sim,
                                               ScenarioKind::validate};
  return kinds;
}

std::optional<ScenarioKind> parse_kind(std::string_view label) {
  for (auto k : all_kinds())
    if (to_string(k) == label) return k;
  return std::nullopt;
}

std::string ConfigError::to_string() const {
  return line == 0 ? message : "line " + std::to_string(line) + ": " + message;
}

double ScenarioConfig::number(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw std::out_of_range("missing key '" + key + "'");
  if (!it->second.is_number()) throw std::invalid_argument("key '" + key + "' is not a single number");
  return it->second.numbers.front();
}

double ScenarioConfig::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::vector<double> ScenarioConfig::list(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw std::out_of_range("missing key '" + key + "'");
  return it->second.numbers;
}

std::string ScenarioConfig::text_or(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second.raw;
}

ParseResult parse_config(std::string_view text) {
  ParseResult result;
  auto& errors = result.errors;
  std::optional<ScenarioKind> kind;
  std::size_t kind_line = 0;
  struct Entry {
    std::string key, raw;
    std::size_t line;
  };
  std::vector<Entry> entries;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw_line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string line = trim(raw_line.substr(0, raw_line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({line_no, "malformed section header '" + line + "'"});
        continue;
      }
      const std::string label = trim(std::string_view(line).substr(1, line.size() - 2));
      const auto k = parse_kind(label);
      if (!k) {
        errors.push_back({line_no, "unknown scenario kind '" + label + "'"});
      } else if (kind) {
        errors.push_back({line_no, "second section header; one scenario per file (first on line " +
                                       std::to_string(kind_line) + ")"});
      } else {
        kind = k;
        kind_line = line_no;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({line_no, "expected 'key = value', got '" + line + "'"});
      continue;
    }
    Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)), line_no};
    if (e.key.empty()) {
      errors.push_back({line_no, "empty key"});
      continue;
    }
    if (e.raw.empty()) {
      errors.push_back({line_no, "empty value for '" + e.key + "'"});
      continue;
    }
    entries.push_back(std::move(e));
  }

  if (!kind) {
    errors.insert(errors.begin(), {0, "missing scenario kind"});
    return result;
  }

  ScenarioConfig cfg;
  cfg.kind = *kind;
  const auto specs = kind_keys(*kind);
  for (const auto& e : entries) {
    cfg.echo.emplace_back(e.key, e.raw);
    const auto m = match_key(e.key, specs);
    if (!m.spec) {
      errors.push_back({e.line, "unknown key '" + e.key + "' for " + std::string(to_string(*kind))});
      continue;
    }
    if (!m.unit_error.empty()) {
      errors.push_back({e.line, m.unit_error});
      continue;
    }
    const KeySpec& s = *m.spec;
    if (cfg.has(s.stem)) {
      errors.push_back({e.line, "duplicate key '" + s.stem + "' (first on line " +
                                    std::to_string(cfg.values.at(s.stem).line) + ")"});
      continue;
    }
    ConfigValue v{e.raw, {}, e.line};
    bool ok = true;
    switch (s.type) {
      case Type::text:
        if (!s.choices.empty() && std::find(s.choices.begin(), s.choices.end(), e.raw) == s.choices.end()) {
          std::string opts;
          for (const auto& c : s.choices) opts += (opts.empty() ? "" : "|") + c;
          errors.push_back({e.line, s.stem + " must be one of " + opts + " (got '" + e.raw + "')"});
          ok = false;
        }
        break;
      case Type::flag:
        if (e.raw == "true" || e.raw == "1") {
          v.numbers = {1.0};
        } else if (e.raw == "false" || e.raw == "0") {
          v.numbers = {0.0};
        } else {
          errors.push_back({e.line, s.stem + " must be true or false"});
          ok = false;
        }
        break;
      case Type::list: {
        std::stringstream ss(e.raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto n = to_number(trim(item));
          if (!n) {
            errors.push_back({e.line, s.stem + ": '" + trim(item) + "' is not a number"});
            ok = false;
            break;
          }
          if (!within(s.bound, *n)) {
            errors.push_back({e.line, s.stem + " entries must be " + bound_text(s.bound)});
            ok = false;
            break;
          }
          v.numbers.push_back(*n * m.factor);
        }
        break;
      }
      case Type::number:
      case Type::integer: {
        const auto n = to_number(e.raw);
        if (!n) {
          errors.push_back({e.line, s.stem + ": '" + e.raw + "' is not a number"});
          ok = false;
        } else if (!within(s.bound, *n)) {
          errors.push_back({e.line, s.stem + " must be " + bound_text(s.bound)});
          ok = false;
        } else if (s.type == Type::integer && (std::floor(*n) != *n || *n > 9.0e15)) {
          errors.push_back({e.line, s.stem + " must be an integer"});
          ok = false;
        } else {
          v.numbers = {*n * m.factor};
        }
        break;
      }
    }
    if (ok) cfg.values.emplace(s.stem, std::move(v));
  }

  for (const auto& s : specs) {
    if (s.required && !cfg.has(s.stem))
      errors.push_back({0, "missing key '" + spelled(s) + "'"});
  }
  for (const auto& g : required_groups(*kind)) {
    std::vector<std::string> members, present;
    for (const auto& s : specs) {
      if (s.group != g) continue;
      members.push_back(spelled(s));
      if (cfg.has(s.stem)) present.push_back(s.stem);
    }
    std::string names;
    for (const auto& n : members) names += (names.empty() ? "" : " or ") + n;
    if (present.empty()) errors.push_back({0, "missing key: one of " + names});
    if (present.size() > 1) errors.push_back({0, "conflicting keys: give only one of " + names});
  }
  if (*kind == ScenarioKind::excitation && cfg.has("power") != cfg.has("length"))
    errors.push_back({0, "power and length must be given together"});
  if (*kind == ScenarioKind::fock_sim) {
    const std::string init = cfg.text_or("initial", "");
    if (init == "number" && !cfg.has("occupations")) errors.push_back({0, "initial = number needs occupations"});
    if (init == "coherent" && !cfg.has("alphas")) errors.push_back({0, "initial = coherent needs alphas"});
    if (init == "thermal" && !cfg.has("beta")) errors.push_back({0, "initial = thermal needs beta_cm"});
    if (cfg.has("coherence_from") != cfg.has("coherence_to"))
      errors.push_back({0, "coherence_from and coherence_to must be given together"});
  }
  if (cfg.has("lambda_bar") && cfg.number_or("lambda_bar_override", 0.0) == 0.0) {
    const double lb = cfg.number("lambda_bar");
    if (lb < 1.9e-14 || lb > 2.2e-14)
      errors.push_back({cfg.values.at("lambda_bar").line,
                        "lambda_bar outside [1.9e-14, 2.2e-14] cm; set lambda_bar_override = true to accept"});
  }
  result.config = std::move(cfg);
  return result;
}

ConfigParseError::ConfigParseError(std::vector<ConfigError> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid scenario config:";
        for (const auto& e : errors) msg += "\n  " + e.to_string();
        return msg;
      }()),
      errors_(std::move(errors)) {}

ScenarioConfig parse_config_or_throw(std::string_view text) {
  auto r = parse_config(text);
  if (!r.ok()) throw ConfigParseError(std::move(r.errors));
  return std::move(*r.config);
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_or_throw(ss.str());
}

std::vector<std::string> describe_keys(ScenarioKind kind) {
  std::vector<std::string> out;
  for (const auto& s : kind_keys(kind)) {
    std::string name = s.stem;
    if (s.dim != Dim::none) name += "_{" + unit_list(s.dim) + "}";
    std::string line = name + ": " + s.help;
    if (s.required) line += " [required]";
    if (!s.group.empty()) line += " [one of group '" + s.group + "']";
    out.push_back(line);
  }
  return out;
}

}  // namespace collapse::cli
