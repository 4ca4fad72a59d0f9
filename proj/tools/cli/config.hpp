#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crowdplay::cli {

/// Raised for any invalid setting. The message names the offending field.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PlayerRange {
  std::int64_t lo = 1;
  std::int64_t hi = 1;

  bool single() const noexcept { return lo == hi; }
  friend bool operator==(const PlayerRange&, const PlayerRange&) = default;
};

/// Every knob of a run. Defaults are the expert-crowd plug-in values.
struct RunConfig {
  double quality = 0.99;
  double lambda_h = 0.1;
  double t_d = 0.15;
  std::int64_t n = 100;
  std::optional<std::int64_t> m;  ///< empty: no losing state
  PlayerRange players;
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  std::uint64_t round_cap = 1'000'000;
  unsigned threads = 0;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Setting name (without leading dashes) to raw text, e.g. {"lambda-h", "0.2"}.
using Settings = std::map<std::string, std::string, std::less<>>;

/// Names accepted in config files and as --flags.
bool is_known_setting(std::string_view key);

/// Parses the flat `key = value` format: one pair per line, `#` starts a
/// comment, blank lines are ignored. Underscores in keys are read as dashes.
Settings parse_settings(std::string_view text, std::string_view source = "config");
Settings load_settings_file(const std::filesystem::path& path);

/// Applies one setting to `config`, validating it in isolation.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Defaults, then file settings, then flag settings; each layer overrides the
/// previous one. Cross-field checks run on the result.
RunConfig resolve_config(const Settings& file, const Settings& flags);

void validate(const RunConfig& config);

}  // namespace crowdplay::cli
