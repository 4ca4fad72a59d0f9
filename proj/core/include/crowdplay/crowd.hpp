// Effective chain parameters for one or many identical players feeding inputs
// into a game whose state is only visible after an observation delay.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "crowdplay/ruin.hpp"

namespace crowdplay {

/// One player: probability that an input is correct, and reaction rate
/// (mean reaction time is 1 / lambda_h).
class PlayerProfile {
public:
  PlayerProfile(double quality, double lambda_h);

  double quality() const noexcept { return quality_; }
  double lambda_h() const noexcept { return lambda_h_; }

private:
  double quality_;
  double lambda_h_;
};

/// Observation delay t_d (seconds) and number of simultaneous players.
class Environment {
public:
  Environment(double t_d, std::int64_t n_players);

  double t_d() const noexcept { return t_d_; }
  std::int64_t n_players() const noexcept { return n_players_; }

private:
  double t_d_;
  std::int64_t n_players_;
};

struct EffectiveModel {
  double p_collision_free;
  double effective_quality;
  TransitionRates rates;
  /// Mean holding time 1 / (N lambda_h) plus the observation delay.
  double time_per_move_s;
};

TransitionRates single_player_rates(const PlayerProfile& profile);

/// Probability that no other player reacts within t_d of the first input:
/// exp(-lambda_h (N - 1) t_d).
double collision_probability(const PlayerProfile& profile, const Environment& env);

/// q' = q * P_c, the chance that a round produces a net good move.
double effective_quality(const PlayerProfile& profile, const Environment& env);

/// Throws std::range_error when q' underflows to zero (absurdly large
/// lambda_h * N * t_d), because the resulting rates would not be valid.
EffectiveModel n_player_effective_model(const PlayerProfile& profile, const Environment& env);

/// Probability of ever making n net good moves (no losing state), using the
/// jump probability q'.
double win_probability_crowd(const PlayerProfile& profile, const Environment& env,
                             std::int64_t n);

/// n (1 + N lambda_h t_d) / (N lambda_h (2 q' - 1)), or infinite when
/// q' <= 1/2.
ExtendedReal expected_game_time_crowd(const PlayerProfile& profile, const Environment& env,
                                      std::int64_t n);

/// n t_d / (2 q - 1): the single-player game time as lambda_h grows without
/// bound. Throws std::invalid_argument for quality <= 1/2.
double high_rate_limit_time(double quality, double t_d, std::int64_t n);

/// 2 q' > 1 for the given crowd size. This is the predicate that separates
/// finite from infinite expected game time.
bool guarantees_win(const PlayerProfile& profile, double t_d, std::int64_t n_players);

struct PlayerLimit {
  enum class Kind {
    count,        ///< a finite largest crowd size, stored in `players`
    unbounded,    ///< every crowd size guarantees a win (no delay)
    no_guarantee  ///< not even a single player guarantees a win
  };
  Kind kind;
  std::int64_t players = 0;

  static PlayerLimit finite(std::int64_t n) { return {Kind::count, n}; }
  static PlayerLimit unlimited() { return {Kind::unbounded, 0}; }
  static PlayerLimit none() { return {Kind::no_guarantee, 0}; }
};

/// Largest N with 2 q exp(-lambda_h (N - 1) t_d) > 1.
PlayerLimit max_guaranteed_win_players(const PlayerProfile& profile, double t_d);

class NoGuaranteeError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

struct OptimalCrowd {
  std::int64_t n_players;
  double time_s;
};

/// Exhaustive search of expected_game_time_crowd over N = 1..N_max (or
/// 1..cap when a cap is supplied and smaller). Ties go to the smaller N.
///
/// Throws NoGuaranteeError when no crowd size guarantees a win, and
/// std::invalid_argument when N_max is unbounded and no cap is given.
OptimalCrowd optimal_player_count(const PlayerProfile& profile, double t_d, std::int64_t n,
                                  std::optional<std::int64_t> cap = std::nullopt);

}  // namespace crowdplay
