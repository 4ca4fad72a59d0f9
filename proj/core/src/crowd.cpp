#include "crowdplay/crowd.hpp"

#include <cmath>
#include <limits>

namespace crowdplay {

PlayerProfile::PlayerProfile(double quality, double lambda_h)
    : quality_(quality), lambda_h_(lambda_h) {
  if (!(quality > 0.0 && quality < 1.0)) {
    throw std::invalid_argument("player quality q must lie strictly between 0 and 1");
  }
  if (!(lambda_h > 0.0) || !std::isfinite(lambda_h)) {
    throw std::invalid_argument("reaction rate lambda_h must be finite and > 0");
  }
}

Environment::Environment(double t_d, std::int64_t n_players) : t_d_(t_d), n_players_(n_players) {
  if (!(t_d >= 0.0) || !std::isfinite(t_d)) {
    throw std::invalid_argument("observation delay t_d must be finite and >= 0");
  }
  if (n_players < 1) throw std::invalid_argument("number of players N must be >= 1");
}

namespace {

TransitionRates split_rate(double quality, double total) {
  return TransitionRates{quality * total, (1.0 - quality) * total};
}

}  // namespace

TransitionRates single_player_rates(const PlayerProfile& profile) {
  return split_rate(profile.quality(), profile.lambda_h());
}

double collision_probability(const PlayerProfile& profile, const Environment& env) {
  if (env.n_players() == 1 || env.t_d() == 0.0) return 1.0;
  const auto others = static_cast<double>(env.n_players() - 1);
  return std::exp(-profile.lambda_h() * others * env.t_d());
}

double effective_quality(const PlayerProfile& profile, const Environment& env) {
  return profile.quality() * collision_probability(profile, env);
}

EffectiveModel n_player_effective_model(const PlayerProfile& profile, const Environment& env) {
  const double p_c = collision_probability(profile, env);
  const double q_eff = profile.quality() * p_c;
  if (!(q_eff > 0.0)) {
    throw std::range_error("effective quality underflows to zero for this crowd");
  }
  const double total = static_cast<double>(env.n_players()) * profile.lambda_h();
  return EffectiveModel{p_c, q_eff, split_rate(q_eff, total), 1.0 / total + env.t_d()};
}

double win_probability_crowd(const PlayerProfile& profile, const Environment& env,
                             std::int64_t n) {
  const auto rules = GameRules::unbounded(n);
  const double q_eff = effective_quality(profile, env);
  if (q_eff == 0.0) return 0.0;
  return win_probability(JumpProbability{q_eff}, rules);
}

bool guarantees_win(const PlayerProfile& profile, double t_d, std::int64_t n_players) {
  return 2.0 * effective_quality(profile, Environment{t_d, n_players}) > 1.0;
}

ExtendedReal expected_game_time_crowd(const PlayerProfile& profile, const Environment& env,
                                      std::int64_t n) {
  if (n < 1) throw std::invalid_argument("winning distance n must be >= 1");
  if (!guarantees_win(profile, env.t_d(), env.n_players())) return ExtendedReal::infinite();
  const double crowd_rate = static_cast<double>(env.n_players()) * profile.lambda_h();
  const double q_eff = effective_quality(profile, env);
  const double time = static_cast<double>(n) * (1.0 + crowd_rate * env.t_d()) /
                      (crowd_rate * (2.0 * q_eff - 1.0));
  return std::isfinite(time) ? ExtendedReal{time} : ExtendedReal::infinite();
}

double high_rate_limit_time(double quality, double t_d, std::int64_t n) {
  if (!(quality > 0.5 && quality < 1.0)) {
    throw std::invalid_argument("high-rate limit requires 1/2 < quality < 1");
  }
  if (!(t_d >= 0.0)) throw std::invalid_argument("observation delay t_d must be >= 0");
  if (n < 1) throw std::invalid_argument("winning distance n must be >= 1");
  return static_cast<double>(n) * t_d / (2.0 * quality - 1.0);
}

PlayerLimit max_guaranteed_win_players(const PlayerProfile& profile, double t_d) {
  if (!guarantees_win(profile, t_d, 1)) return PlayerLimit::none();
  if (t_d == 0.0) return PlayerLimit::unlimited();

  // 2 q exp(-lambda_h (N - 1) t_d) > 1  <=>  N < 1 + ln(2q) / (lambda_h t_d)
  const double bound = 1.0 + std::log(2.0 * profile.quality()) / (profile.lambda_h() * t_d);
  if (!(bound < 0x1p62)) {
    throw std::overflow_error("guaranteed-win crowd size exceeds the representable range");
  }
  auto players = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(bound)) - 1);
  // Settle the last unit against the exact predicate used for the game time.
  while (players > 1 && !guarantees_win(profile, t_d, players)) --players;
  while (guarantees_win(profile, t_d, players + 1)) ++players;
  return PlayerLimit::finite(players);
}

OptimalCrowd optimal_player_count(const PlayerProfile& profile, double t_d, std::int64_t n,
                                  std::optional<std::int64_t> cap) {
  if (cap && *cap < 1) throw std::invalid_argument("player cap must be >= 1");
  const PlayerLimit limit = max_guaranteed_win_players(profile, t_d);

  std::int64_t upper = 0;
  switch (limit.kind) {
    case PlayerLimit::Kind::no_guarantee:
      throw NoGuaranteeError("no crowd size guarantees a win at this quality");
    case PlayerLimit::Kind::unbounded:
      if (!cap) {
        throw std::invalid_argument("every crowd size guarantees a win; supply a player cap");
      }
      upper = *cap;
      break;
    case PlayerLimit::Kind::count:
      upper = cap ? std::min(*cap, limit.players) : limit.players;
      break;
  }

  OptimalCrowd best{1, std::numeric_limits<double>::infinity()};
  for (std::int64_t players = 1; players <= upper; ++players) {
    const double time = expected_game_time_crowd(profile, Environment{t_d, players}, n).as_double();
    if (time < best.time_s) best = {players, time};
  }
  return best;
}

}  // namespace crowdplay
