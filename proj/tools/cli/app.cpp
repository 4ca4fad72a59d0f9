#include "cli/app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>

#include "cli/config.hpp"

namespace crowdplay::cli {

namespace {

struct FlagSpec {
  const char* key;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"q", "probability that a player's input is correct, in (0, 1)"},
    {"lambda-h", "per-player reaction rate in 1/s"},
    {"t-d", "observation delay in seconds"},
    {"n", "net good moves needed to win"},
    {"m", "net bad moves that lose, or 'inf'"},
    {"players", "crowd size N, or a range lo..hi for sweep"},
    {"trials", "Monte Carlo trials"},
    {"seed", "master seed"},
    {"round-cap", "per-trial cap on rounds or steps"},
    {"threads", "worker threads, 0 for all cores"},
};

std::ofstream open_output(const std::string& path) {
  std::ofstream file{path};
  if (!file) throw ConfigError("--out: cannot write '" + path + "'");
  return file;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const ValidationHooks& hooks) {
  CLI::App app{"Crowd play as a gambler's ruin: closed forms, sweeps and Monte Carlo checks",
               "crowdplay"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::string per_trial_path;
  std::map<std::string, std::string> raw;
  app.add_option("--config", config_path, "key = value settings file; flags override it");
  for (const FlagSpec& flag : kFlags) {
    app.add_option("--" + std::string(flag.key), raw[flag.key], flag.help);
  }
  app.add_option("--out", out_path, "write the main output to a file instead of stdout");

  auto* analyze = app.add_subcommand("analyze", "closed-form report for one crowd size");
  auto* sweep = app.add_subcommand("sweep", "CSV of closed-form results over a range of crowd sizes");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo playthroughs of the agent-level model");
  auto* per_trial = simulate->add_option(
      "--per-trial", per_trial_path,
      "emit one CSV line per trial; to FILE if given, else to the main output with the report on stderr");
  per_trial->expected(0, 1);
  auto* validate_cmd = app.add_subcommand("validate", "check the simulators against the closed forms");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "crowdplay: " << e.what() << "\nrun with --help for usage\n";
    return kExitConfigError;
  }

  RunConfig config;
  std::ofstream out_file;
  std::ofstream trial_file;
  try {
    Settings flags;
    for (const FlagSpec& flag : kFlags) {
      const auto* option = app.get_option("--" + std::string(flag.key));
      if (option->count() > 0) flags.insert_or_assign(flag.key, raw[flag.key]);
    }
    const Settings file = config_path.empty() ? Settings{} : load_settings_file(config_path);
    config = resolve_config(file, flags);
    if (!out_path.empty()) out_file = open_output(out_path);
    if (!per_trial_path.empty()) {
      trial_file.open(per_trial_path);
      if (!trial_file) throw ConfigError("--per-trial: cannot write '" + per_trial_path + "'");
    }
  } catch (const ConfigError& e) {
    err << "crowdplay: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::ostream& sink = out_path.empty() ? out : out_file;
  try {
    if (analyze->parsed()) return cmd_analyze(config, sink, err);
    if (sweep->parsed()) return cmd_sweep(config, sink, err);
    if (simulate->parsed()) {
      if (per_trial->count() == 0) return cmd_simulate(config, sink, err, nullptr);
      if (per_trial_path.empty()) return cmd_simulate(config, err, err, &sink);
      return cmd_simulate(config, sink, err, &trial_file);
    }
    if (validate_cmd->parsed()) return cmd_validate(config, sink, err, hooks);
  } catch (const ConfigError& e) {
    err << "crowdplay: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace crowdplay::cli
