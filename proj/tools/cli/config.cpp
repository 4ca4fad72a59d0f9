#include "cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace crowdplay::cli {

namespace {

constexpr std::array<std::string_view, 10> kKeys{
    "q", "lambda-h", "t-d", "n", "m", "players", "trials", "seed", "round-cap", "threads",
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError("--" + std::string(key) + ": '" + std::string(value) + "' " + std::string(why));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T out{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (text.empty() || ec != std::errc{} || ptr != end) fail(key, text, "is not a valid number");
  return out;
}

double parse_real(std::string_view key, std::string_view text) {
  const double v = parse_number<double>(key, text);
  if (!std::isfinite(v)) fail(key, text, "must be finite");
  return v;
}

PlayerRange parse_players(std::string_view text) {
  const auto dots = text.find("..");
  PlayerRange range;
  if (dots == std::string_view::npos) {
    range.lo = range.hi = parse_number<std::int64_t>("players", text);
  } else {
    range.lo = parse_number<std::int64_t>("players", text.substr(0, dots));
    range.hi = parse_number<std::int64_t>("players", text.substr(dots + 2));
  }
  if (range.lo < 1) fail("players", text, "must be >= 1");
  if (range.lo > range.hi) fail("players", text, "range must satisfy lo <= hi");
  return range;
}

}  // namespace

bool is_known_setting(std::string_view key) {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

Settings parse_settings(std::string_view text, std::string_view source) {
  Settings settings;
  std::istringstream lines{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const auto where = std::string(source) + ":" + std::to_string(number);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key{trim(body.substr(0, eq))};
    std::replace(key.begin(), key.end(), '_', '-');
    const auto value = trim(body.substr(eq + 1));
    if (!is_known_setting(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    settings.insert_or_assign(std::move(key), std::string(value));
  }
  return settings;
}

Settings load_settings_file(const std::filesystem::path& path) {
  std::ifstream in{path};
  if (!in) throw ConfigError("--config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_settings(text.str(), path.string());
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  if (key == "q") {
    config.quality = parse_real(key, value);
    if (!(config.quality > 0.0 && config.quality < 1.0)) fail(key, value, "must lie strictly between 0 and 1");
  } else if (key == "lambda-h") {
    config.lambda_h = parse_real(key, value);
    if (!(config.lambda_h > 0.0)) fail(key, value, "must be > 0");
  } else if (key == "t-d") {
    config.t_d = parse_real(key, value);
    if (!(config.t_d >= 0.0)) fail(key, value, "must be >= 0");
  } else if (key == "n") {
    config.n = parse_number<std::int64_t>(key, value);
    if (config.n < 1) fail(key, value, "must be >= 1");
  } else if (key == "m") {
    if (value == "inf") {
      config.m.reset();
    } else {
      config.m = parse_number<std::int64_t>(key, value);
      if (*config.m < 1) fail(key, value, "must be >= 1 or 'inf'");
    }
  } else if (key == "players") {
    config.players = parse_players(value);
  } else if (key == "trials") {
    if (value.starts_with('-')) fail(key, value, "must be >= 1");
    config.trials = parse_number<std::uint64_t>(key, value);
    if (config.trials < 1) fail(key, value, "must be >= 1");
  } else if (key == "seed") {
    if (value.starts_with('-')) fail(key, value, "must be a nonnegative integer");
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "round-cap") {
    if (value.starts_with('-')) fail(key, value, "must be >= 1");
    config.round_cap = parse_number<std::uint64_t>(key, value);
    if (config.round_cap < 1) fail(key, value, "must be >= 1");
  } else if (key == "threads") {
    if (value.starts_with('-')) fail(key, value, "must be >= 0");
    config.threads = parse_number<unsigned>(key, value);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

RunConfig resolve_config(const Settings& file, const Settings& flags) {
  RunConfig config;
  for (const auto& [key, value] : file) apply_setting(config, key, value);
  for (const auto& [key, value] : flags) apply_setting(config, key, value);
  validate(config);
  return config;
}

void validate(const RunConfig& config) {
  auto require = [](bool ok, std::string_view key, std::string_view why) {
    if (!ok) throw ConfigError("--" + std::string(key) + ": " + std::string(why));
  };
  require(config.quality > 0.0 && config.quality < 1.0, "q", "must lie strictly between 0 and 1");
  require(config.lambda_h > 0.0 && std::isfinite(config.lambda_h), "lambda-h", "must be finite and > 0");
  require(config.t_d >= 0.0 && std::isfinite(config.t_d), "t-d", "must be finite and >= 0");
  require(config.n >= 1, "n", "must be >= 1");
  require(!config.m || *config.m >= 1, "m", "must be >= 1 or 'inf'");
  require(config.players.lo >= 1, "players", "must be >= 1");
  require(config.players.lo <= config.players.hi, "players", "range must satisfy lo <= hi");
  require(config.trials >= 1, "trials", "must be >= 1");
  require(config.round_cap >= 1, "round-cap", "must be >= 1");
}

}  // namespace crowdplay::cli
