#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pllnet/cli/commands.hpp"
#include "pllnet/cli/config.hpp"

namespace pllnet::cli {

inline const char* csv_schemas() {
  return R"(CSV output (header always present, '#' lines carry the normalized parameters):
  curves          mu|K, n, root_branch, omega, tau_star, delta_sign
  rightmost       tau, re_lambda, im_lambda, certified
  snmap           tau_star, omega, root_branch, n, delta, delta_sign, branch_id
  snmap --samples branch_id, root_branch, n, tau, s_n
  releq           branch_id, tau, omega_hat
  releq --case-curves  m, mu, K
  zero-roots      n, tau_star, delta0
  phasediff-check omega_hat, c_const, quantity, value
  simulate        t, x1_1, x2_1, ..., x1_N, x2_N
All values are in units with omega_M = 1. Numbers carry 17 significant digits.
Exit codes: 0 success, 1 domain error, 2 usage or I/O error.)";
}

namespace detail {

struct FlagSpec {
  const char* name;
  const char* help;
  bool is_switch = false;
};

inline const std::vector<FlagSpec>& flag_specs() {
  static const std::vector<FlagSpec> specs{
      {"config", "JSON file of settings keyed by flag name; flags override it"},
      {"model", "full-phase | phase | phase-rotating | phase-difference"},
      {"block", "fix | standard"},
      {"eq", "plus | minus equilibrium"},
      {"N", "number of nodes"},
      {"K", "coupling strength"},
      {"mu", "loop-filter gain"},
      {"omega-m", "free-running frequency (results are normalized to 1)"},
      {"tau", "delay"},
      {"mu-grid", "lo:hi:count"},
      {"K-grid", "lo:hi:count"},
      {"tau-grid", "lo:hi:count"},
      {"tau-window", "lo:hi"},
      {"n", "winding range lo:hi"},
      {"m", "case-curve index range lo:hi"},
      {"tau-max", "largest delay reported"},
      {"out", "CSV path (default stdout)"},
      {"svg", "SVG line chart path"},
      {"threads", "worker threads, 0 = hardware concurrency"},
      {"seed", "seed for randomized checks"},
      {"scheme", "newton | halley root polishing"},
      {"t-end", "simulation end time"},
      {"step", "integration step (default tau/100)"},
      {"amplitude", "history perturbation amplitude"},
      {"perturb", "fix | standard perturbation direction"},
      {"transient", "discarded fraction of the run before period detection"},
      {"pi-multiple", "omega_M tau in multiples of pi for --case-curves"},
      {"omega-hat", "rotation frequency of the relative equilibrium"},
      {"c-offset", "offset added to the phase-difference constant"},
      {"samples", "snmap: emit S_n curves instead of zeros", true},
      {"case-curves", "releq: emit K(mu) curves", true},
      {"tol", "symmetry residual tolerance"},
  };
  return specs;
}

}  // namespace detail

/// \brief Parses argv into a RunConfig: config-file values first, explicit flags on top.
inline RunConfig parse_args(int argc, const char* const* argv, std::ostream& out, bool& help_shown) {
  CLI::App app{"Delay-coupled PLL network bifurcation toolkit", "pllnet"};
  app.footer(csv_schemas());
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> switches;
  std::vector<CLI::App*> subs;
  for (const auto& [name, cmd] : command_names()) {
    (void)cmd;
    CLI::App* sub = app.add_subcommand(name);
    sub->footer(csv_schemas());
    for (const auto& f : detail::flag_specs()) {
      if (f.is_switch) sub->add_flag(std::string("--") + f.name, switches[name][f.name], f.help);
      else sub->add_option(std::string("--") + f.name, values[name][f.name], f.help);
    }
    subs.push_back(sub);
  }
  help_shown = false;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    help_shown = true;
    return {};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    const std::string name = sub->get_name();
    std::map<std::string, std::string> kv;
    if (sub->count("--config")) kv = load_config_file(values[name]["config"]);
    for (const auto& f : detail::flag_specs()) {
      const std::string opt = std::string("--") + f.name;
      if (!sub->count(opt)) continue;
      kv[f.name] = f.is_switch ? "true" : values[name][f.name];
    }
    kv.erase("config");
    return make_config(name, kv);
  }
  throw UsageError("a command is required");
}

/// \brief Entry point shared by the executable and the tests; returns the exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    bool help = false;
    const RunConfig c = parse_args(argc, argv, out, help);
    if (help) return 0;
    return run(c, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::StepTooLarge;
    err << (usage ? "usage error: " : "error: ") << e.what() << "\n";
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pllnet::cli
