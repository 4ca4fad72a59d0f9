// Absorption analytics for the constant-rate birth-death chain on
// {-m, ..., 0, ..., n}: a walk starting at 0 that moves up at rate lambda and
// down at rate mu until it reaches the winning state n or the losing state -m.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace crowdplay {

/// A nonnegative quantity that may diverge. Divergence is carried as an
/// explicit state instead of an IEEE infinity so callers must handle it.
class ExtendedReal {
public:
  explicit ExtendedReal(double value);
  static ExtendedReal infinite() noexcept { return ExtendedReal{}; }

  bool is_finite() const noexcept { return value_.has_value(); }
  bool is_infinite() const noexcept { return !value_.has_value(); }

  /// Throws std::logic_error when infinite.
  double value() const;

  /// IEEE view: +inf when infinite. Handy for comparisons and printing.
  double as_double() const noexcept;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

private:
  ExtendedReal() = default;
  std::optional<double> value_;
};

ExtendedReal operator/(const ExtendedReal& numerator, double denominator);
ExtendedReal operator*(const ExtendedReal& value, double factor);

/// Absorbing boundaries: n net good moves win, m net bad moves lose.
/// A missing losing distance means the walk can never lose.
class GameRules {
public:
  static GameRules bounded(std::int64_t winning_distance, std::int64_t losing_distance);
  static GameRules unbounded(std::int64_t winning_distance);

  std::int64_t winning_distance() const noexcept { return winning_; }
  std::optional<std::int64_t> losing_distance() const noexcept { return losing_; }
  bool has_losing_state() const noexcept { return losing_.has_value(); }

private:
  GameRules(std::int64_t winning, std::optional<std::int64_t> losing)
      : winning_(winning), losing_(losing) {}

  std::int64_t winning_;
  std::optional<std::int64_t> losing_;
};

/// Step-up probability of the embedded jump chain. Must lie strictly inside
/// (0, 1); the endpoints make the walk deterministic and are rejected.
class JumpProbability {
public:
  explicit JumpProbability(double up);

  double up() const noexcept { return up_; }
  double down() const noexcept { return 1.0 - up_; }

private:
  double up_;
};

/// Good-move rate lambda and bad-move rate mu, both in events per second.
class TransitionRates {
public:
  TransitionRates(double lambda, double mu);

  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  double total() const noexcept { return lambda_ + mu_; }
  /// Mean sojourn time in any interior state.
  double holding_time() const noexcept { return 1.0 / total(); }

private:
  double lambda_;
  double mu_;
};

/// lambda / (lambda + mu), in (0, 1]. The value 1 (mu == 0) describes a walk
/// that never steps down; it is not a valid JumpProbability, and the
/// rate-based operations below special-case it.
double jump_probability(const TransitionRates& rates);

struct AbsorptionStats {
  double p_win;
  ExtendedReal expected_steps;
  ExtendedReal expected_game_time_s;
  ExtendedReal expected_time_to_win_s;
};

/// Probability of reaching n before -m. Without a losing state this is the
/// probability of ever reaching n, min(1, (p/(1-p))^n).
double win_probability(JumpProbability p, const GameRules& rules);

/// Expected number of jumps until absorption. Infinite for an unbounded walk
/// with p <= 1/2.
ExtendedReal expected_steps(JumpProbability p, const GameRules& rules);

/// Expected wall-clock duration of one playthrough, excluding any observation
/// delay: expected_steps / (lambda + mu).
ExtendedReal expected_game_time(const TransitionRates& rates, const GameRules& rules);

/// Expected time until the first winning playthrough when lost games are
/// restarted, computed as expected_game_time / win_probability.
///
/// This charges every attempt the unconditional mean duration. An exact
/// restart analysis would use the mean duration of losing games for the
/// failed attempts, so the result is an approximation whenever losing and
/// winning playthroughs have different mean lengths.
///
/// Throws std::invalid_argument for rules without a losing state.
ExtendedReal expected_time_to_win(const TransitionRates& rates, const GameRules& rules);

/// All four quantities at once. For rules without a losing state the
/// time-to-win equals the game time divided by p_win (so it is the game time
/// itself whenever the win is certain).
AbsorptionStats absorption_stats(const TransitionRates& rates, const GameRules& rules);

std::string to_string(const ExtendedReal& value);

}  // namespace crowdplay
