#include "crowdplay/ruin.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdplay {

ExtendedReal::ExtendedReal(double value) : value_(value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw std::invalid_argument("ExtendedReal requires a finite nonnegative value");
  }
}

double ExtendedReal::value() const {
  if (!value_) {
    throw std::logic_error("ExtendedReal::value() called on an infinite quantity");
  }
  return *value_;
}

double ExtendedReal::as_double() const noexcept {
  return value_ ? *value_ : std::numeric_limits<double>::infinity();
}

ExtendedReal operator/(const ExtendedReal& numerator, double denominator) {
  if (numerator.is_infinite()) return numerator;
  const double q = numerator.value() / denominator;
  return std::isfinite(q) ? ExtendedReal{q} : ExtendedReal::infinite();
}

ExtendedReal operator*(const ExtendedReal& value, double factor) {
  if (value.is_infinite()) return value;
  const double r = value.value() * factor;
  return std::isfinite(r) ? ExtendedReal{r} : ExtendedReal::infinite();
}

GameRules GameRules::bounded(std::int64_t winning_distance, std::int64_t losing_distance) {
  if (winning_distance < 1) throw std::invalid_argument("winning distance n must be >= 1");
  if (losing_distance < 1) throw std::invalid_argument("losing distance m must be >= 1");
  return GameRules{winning_distance, losing_distance};
}

GameRules GameRules::unbounded(std::int64_t winning_distance) {
  if (winning_distance < 1) throw std::invalid_argument("winning distance n must be >= 1");
  return GameRules{winning_distance, std::nullopt};
}

JumpProbability::JumpProbability(double up) : up_(up) {
  if (!(up > 0.0 && up < 1.0)) {
    throw std::invalid_argument("jump probability must lie strictly between 0 and 1");
  }
}

TransitionRates::TransitionRates(double lambda, double mu) : lambda_(lambda), mu_(mu) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("good-move rate lambda must be finite and > 0");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("bad-move rate mu must be finite and >= 0");
  }
}

double jump_probability(const TransitionRates& rates) {
  return rates.lambda() / rates.total();
}

namespace {

// log of the down/up odds ratio r = (1 - p) / p.
double log_odds_down(JumpProbability p) { return std::log(p.down()) - std::log(p.up()); }

// (1 - r^m) / (1 - r^(n+m)) evaluated through expm1 so that neither the
// powers nor the differences lose precision for large boundaries or p near
// one half.
double bounded_win_probability(double log_r, double n, double m) {
  if (log_r < 0.0) {
    return std::expm1(m * log_r) / std::expm1((n + m) * log_r);
  }
  // r > 1: divide through by r^(n+m) to keep every power below one.
  return std::exp(-n * log_r) * std::expm1(-m * log_r) / std::expm1(-(n + m) * log_r);
}

// Also catches mu so small relative to lambda that the ratio rounds to 1.
bool never_steps_down(const TransitionRates& rates) { return jump_probability(rates) == 1.0; }

}  // namespace

double win_probability(JumpProbability p, const GameRules& rules) {
  const auto n = static_cast<double>(rules.winning_distance());
  if (!rules.has_losing_state()) {
    if (p.up() >= 0.5) return 1.0;
    return std::exp(-n * log_odds_down(p));
  }
  const auto m = static_cast<double>(*rules.losing_distance());
  if (p.up() == 0.5) return m / (n + m);
  return bounded_win_probability(log_odds_down(p), n, m);
}

ExtendedReal expected_steps(JumpProbability p, const GameRules& rules) {
  const auto n = static_cast<double>(rules.winning_distance());
  const double drift = p.up() - p.down();
  if (!rules.has_losing_state()) {
    if (p.up() <= 0.5) return ExtendedReal::infinite();
    return ExtendedReal{n / drift};
  }
  const auto m = static_cast<double>(*rules.losing_distance());
  if (p.up() == 0.5) return ExtendedReal{n * m};
  const double win = win_probability(p, rules);
  // Optional stopping on the drifted walk: E[steps] * drift = E[final position].
  return ExtendedReal{((n + m) * win - m) / drift};
}

ExtendedReal expected_game_time(const TransitionRates& rates, const GameRules& rules) {
  if (never_steps_down(rates)) {
    return ExtendedReal{static_cast<double>(rules.winning_distance()) / rates.lambda()};
  }
  return expected_steps(JumpProbability{jump_probability(rates)}, rules) / rates.total();
}

ExtendedReal expected_time_to_win(const TransitionRates& rates, const GameRules& rules) {
  if (!rules.has_losing_state()) {
    throw std::invalid_argument("time to win with restarts requires a finite losing distance m");
  }
  const double win = never_steps_down(rates) ? 1.0
                                        : win_probability(JumpProbability{jump_probability(rates)}, rules);
  if (win == 0.0) return ExtendedReal::infinite();
  return expected_game_time(rates, rules) / win;
}

AbsorptionStats absorption_stats(const TransitionRates& rates, const GameRules& rules) {
  AbsorptionStats stats{
      1.0,
      ExtendedReal{static_cast<double>(rules.winning_distance())},
      ExtendedReal::infinite(),
      ExtendedReal::infinite(),
  };
  if (!never_steps_down(rates)) {
    const JumpProbability p{jump_probability(rates)};
    stats.p_win = win_probability(p, rules);
    stats.expected_steps = expected_steps(p, rules);
  }
  stats.expected_game_time_s = stats.expected_steps / rates.total();
  stats.expected_time_to_win_s = stats.p_win == 0.0 ? ExtendedReal::infinite()
                                                     : stats.expected_game_time_s / stats.p_win;
  return stats;
}

std::string to_string(const ExtendedReal& value) {
  if (value.is_infinite()) return "inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value.value());
  return std::string(buf.data(), res.ptr);
}

}  // namespace crowdplay
