#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pllnet/charfun.hpp"
#include "pllnet/cli/output.hpp"
#include "pllnet/model.hpp"
#include "pllnet/spectrum.hpp"

namespace pllnet::cli {

/// Usage or configuration problem; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Curves, Rightmost, Snmap, Releq, ZeroRoots, PhasediffCheck, Simulate, Verify };

inline const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"curves", Command::Curves},       {"rightmost", Command::Rightmost},
      {"snmap", Command::Snmap},         {"releq", Command::Releq},
      {"zero-roots", Command::ZeroRoots}, {"phasediff-check", Command::PhasediffCheck},
      {"simulate", Command::Simulate},   {"verify", Command::Verify}};
  return names;
}

struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;

  std::vector<double> values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[i] = i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1);
    return v;
  }
  Grid scaled(double f) const { return {lo * f, hi * f, count}; }
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct RunConfig {
  Command command = Command::Verify;
  ModelKind model = ModelKind::FullPhase;
  NetworkParams params;  // as given, before normalization
  BlockKind block = BlockKind::Fix;
  EquilibriumBranch eq = EquilibriumBranch::Minus;
  std::optional<Grid> mu_grid, k_grid, tau_grid;
  std::optional<std::pair<double, double>> tau_window;
  IntRange n_range{-2, 4};
  IntRange m_range{1, 4};
  std::optional<double> tau_max;
  std::string out;
  std::string svg;
  unsigned threads = 1;
  unsigned long seed = 12345;
  Scheme scheme = Scheme::Newton;
  double t_end = 1000.0;
  std::optional<double> step;
  double amplitude = 0.05;
  BlockKind perturb = BlockKind::Standard;
  double transient = 0.6;
  int pi_multiple = 2;
  std::optional<double> omega_hat;
  double c_offset = 0.0;
  bool samples = false;
  bool case_curves = false;
  double tol = 1e-2;
};

namespace detail {

inline double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + key + ": '" + s + "'");
  }
}

inline long to_long(const std::string& key, const std::string& s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw UsageError("invalid integer for " + key + ": '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  return parts;
}

inline bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s.empty()) return true;
  if (s == "false" || s == "0") return false;
  throw UsageError("invalid boolean for " + key + ": '" + s + "'");
}

}  // namespace detail

/// "lo:hi:count", count >= 2 and hi > lo
inline Grid parse_grid(const std::string& key, const std::string& s) {
  const auto parts = detail::split(s, ':');
  if (parts.size() != 3) throw UsageError(key + " expects lo:hi:count");
  Grid g{detail::to_double(key, parts[0]), detail::to_double(key, parts[1]),
         static_cast<int>(detail::to_long(key, parts[2]))};
  if (g.count < 2 || !(g.hi > g.lo)) throw UsageError(key + " needs at least 2 points and positive extent");
  return g;
}

inline IntRange parse_range(const std::string& key, const std::string& s) {
  const auto parts = detail::split(s, ':');
  if (parts.size() != 2) throw UsageError(key + " expects lo:hi");
  IntRange r{static_cast<int>(detail::to_long(key, parts[0])), static_cast<int>(detail::to_long(key, parts[1]))};
  if (r.hi < r.lo) throw UsageError(key + " is empty");
  return r;
}

inline std::pair<double, double> parse_window(const std::string& key, const std::string& s) {
  const auto parts = detail::split(s, ':');
  if (parts.size() != 2) throw UsageError(key + " expects lo:hi");
  const double a = detail::to_double(key, parts[0]), b = detail::to_double(key, parts[1]);
  if (!(b > a)) throw UsageError(key + " needs positive extent");
  return {a, b};
}

/// Flattens a JSON config object to the flag-name keyed map.
inline std::map<std::string, std::string> flatten_json(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_string()) out[it.key()] = v.get<std::string>();
    else if (v.is_boolean()) out[it.key()] = v.get<bool>() ? "true" : "false";
    else if (v.is_number_integer()) out[it.key()] = std::to_string(v.get<long>());
    else if (v.is_number()) out[it.key()] = format_number(v.get<double>());
    else throw UsageError("unsupported value for config key " + it.key());
  }
  return out;
}

inline std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
  return flatten_json(j);
}

/// \brief Builds a RunConfig from key/value settings named like the long flags.
inline RunConfig make_config(const std::string& command, const std::map<std::string, std::string>& kv) {
  RunConfig c;
  const auto cmd = command_names().find(command);
  if (cmd == command_names().end()) throw UsageError("unknown command " + command);
  c.command = cmd->second;
  using namespace detail;
  for (const auto& [key, value] : kv) {
    if (key == "model") {
      if (value == "full-phase") c.model = ModelKind::FullPhase;
      else if (value == "phase") c.model = ModelKind::Phase;
      else if (value == "phase-rotating") c.model = ModelKind::PhaseRotatingFrame;
      else if (value == "phase-difference") c.model = ModelKind::PhaseDifference;
      else throw UsageError("unknown model " + value);
    } else if (key == "block" || key == "perturb") {
      BlockKind b;
      if (value == "fix") b = BlockKind::Fix;
      else if (value == "standard") b = BlockKind::Standard;
      else throw UsageError("unknown block " + value);
      (key == "block" ? c.block : c.perturb) = b;
    } else if (key == "eq") {
      if (value == "plus") c.eq = EquilibriumBranch::Plus;
      else if (value == "minus") c.eq = EquilibriumBranch::Minus;
      else throw UsageError("unknown equilibrium " + value);
    } else if (key == "scheme") {
      if (value == "newton") c.scheme = Scheme::Newton;
      else if (value == "halley") c.scheme = Scheme::Halley;
      else throw UsageError("unknown scheme " + value);
    } else if (key == "N") c.params.n_nodes = static_cast<int>(to_long(key, value));
    else if (key == "K") c.params.coupling = to_double(key, value);
    else if (key == "mu") c.params.filter_gain = to_double(key, value);
    else if (key == "omega-m") c.params.free_freq = to_double(key, value);
    else if (key == "tau") c.params.delay = to_double(key, value);
    else if (key == "mu-grid") c.mu_grid = parse_grid(key, value);
    else if (key == "K-grid") c.k_grid = parse_grid(key, value);
    else if (key == "tau-grid") c.tau_grid = parse_grid(key, value);
    else if (key == "tau-window") c.tau_window = parse_window(key, value);
    else if (key == "n") c.n_range = parse_range(key, value);
    else if (key == "m") c.m_range = parse_range(key, value);
    else if (key == "tau-max") c.tau_max = to_double(key, value);
    else if (key == "out") c.out = value;
    else if (key == "svg") c.svg = value;
    else if (key == "threads") c.threads = static_cast<unsigned>(to_long(key, value));
    else if (key == "seed") c.seed = static_cast<unsigned long>(to_long(key, value));
    else if (key == "t-end") c.t_end = to_double(key, value);
    else if (key == "step") c.step = to_double(key, value);
    else if (key == "amplitude") c.amplitude = to_double(key, value);
    else if (key == "transient") c.transient = to_double(key, value);
    else if (key == "pi-multiple") c.pi_multiple = static_cast<int>(to_long(key, value));
    else if (key == "omega-hat") c.omega_hat = to_double(key, value);
    else if (key == "c-offset") c.c_offset = to_double(key, value);
    else if (key == "samples") c.samples = to_bool(key, value);
    else if (key == "case-curves") c.case_curves = to_bool(key, value);
    else if (key == "tol") c.tol = to_double(key, value);
    else if (key == "config") continue;
    else throw UsageError("unknown setting " + key);
  }
  try {
    c.params.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (c.transient < 0.0 || c.transient >= 1.0) throw UsageError("transient must lie in [0, 1)");
  if (c.amplitude < 0.0) throw UsageError("amplitude must be >= 0");
  return c;
}

}  // namespace pllnet::cli
