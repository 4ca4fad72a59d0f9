#include "crowdplay/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdplay {

namespace {

// Shared walk loop. `holding` draws the sojourn before each jump.
template <typename Holding>
TrialOutcome walk(double up, const GameRules& rules, RandomStream& rng, std::uint64_t step_cap,
                  Holding&& holding) {
  const std::int64_t target = rules.winning_distance();
  const auto floor = rules.losing_distance();
  std::int64_t position = 0;
  std::uint64_t steps = 0;
  double elapsed = 0.0;
  for (;;) {
    if (!floor && steps >= step_cap) return {Absorption::capped, steps, elapsed};
    elapsed += holding(rng);
    position += rng.bernoulli(up) ? 1 : -1;
    ++steps;
    if (position == target) return {Absorption::won, steps, elapsed};
    if (floor && position == -*floor) return {Absorption::lost, steps, elapsed};
  }
}

Estimate proportion(std::uint64_t hits, std::uint64_t total) {
  if (total == 0) return {0.0, 0.0};
  const double p = static_cast<double>(hits) / static_cast<double>(total);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(total))};
}

// Two-pass sample mean and standard error over the selected elements.
template <typename Range, typename Select, typename Value>
std::optional<Estimate> sample_mean(const Range& items, Select&& select, Value&& value) {
  std::uint64_t count = 0;
  double sum = 0.0;
  for (const auto& item : items) {
    if (!select(item)) continue;
    sum += value(item);
    ++count;
  }
  if (count == 0) return std::nullopt;
  const double mean = sum / static_cast<double>(count);
  if (count == 1) return Estimate{mean, 0.0};
  double squares = 0.0;
  for (const auto& item : items) {
    if (!select(item)) continue;
    const double d = value(item) - mean;
    squares += d * d;
  }
  const double variance = squares / static_cast<double>(count - 1);
  return Estimate{mean, std::sqrt(variance / static_cast<double>(count))};
}

}  // namespace

TrialOutcome simulate_jump_walk(JumpProbability p, const GameRules& rules, RandomStream& rng,
                                std::uint64_t step_cap) {
  return walk(p.up(), rules, rng, step_cap, [](RandomStream&) { return 0.0; });
}

TrialOutcome simulate_jump_walk(JumpProbability p, const GameRules& rules, std::uint64_t seed,
                                std::uint64_t step_cap) {
  RandomStream rng{seed, 0};
  return simulate_jump_walk(p, rules, rng, step_cap);
}

TrialOutcome simulate_ctmc(const TransitionRates& rates, const GameRules& rules,
                           RandomStream& rng, std::uint64_t step_cap) {
  const double total = rates.total();
  return walk(jump_probability(rates), rules, rng, step_cap,
              [total](RandomStream& r) { return r.exponential(total); });
}

TrialOutcome simulate_ctmc(const TransitionRates& rates, const GameRules& rules,
                           std::uint64_t seed, std::uint64_t step_cap) {
  RandomStream rng{seed, 0};
  return simulate_ctmc(rates, rules, rng, step_cap);
}

CrowdRoundOutcome simulate_crowd_round(const PlayerProfile& profile, const Environment& env,
                                       RandomStream& rng) {
  constexpr double never = std::numeric_limits<double>::infinity();
  double first = never;
  double second = never;
  for (std::int64_t player = 0; player < env.n_players(); ++player) {
    const double reaction = rng.exponential(profile.lambda_h());
    if (reaction < first) {
      second = first;
      first = reaction;
    } else if (reaction < second) {
      second = reaction;
    }
  }
  CrowdRoundOutcome round{first, std::nullopt, false, -1};
  if (env.n_players() >= 2) {
    round.gap_to_second_s = second - first;
    round.duplicated = *round.gap_to_second_s < env.t_d();
  }
  const bool correct = rng.bernoulli(profile.quality());
  round.net_move = correct && !round.duplicated ? 1 : -1;
  return round;
}

CrowdRoundOutcome simulate_crowd_round(const PlayerProfile& profile, const Environment& env,
                                       std::uint64_t seed) {
  RandomStream rng{seed, 0};
  return simulate_crowd_round(profile, env, rng);
}

TrialOutcome simulate_crowd_playthrough(const PlayerProfile& profile, const Environment& env,
                                        std::int64_t n, RandomStream& rng,
                                        std::uint64_t round_cap) {
  if (n < 1) throw std::invalid_argument("winning distance n must be >= 1");
  if (round_cap < 1) throw std::invalid_argument("round cap must be >= 1");
  std::int64_t position = 0;
  std::uint64_t rounds = 0;
  double elapsed = 0.0;
  while (position < n) {
    if (rounds >= round_cap) return {Absorption::capped, rounds, elapsed};
    const CrowdRoundOutcome round = simulate_crowd_round(profile, env, rng);
    elapsed += round.first_reaction_s + env.t_d();
    position += round.net_move;
    ++rounds;
  }
  return {Absorption::won, rounds, elapsed};
}

TrialOutcome simulate_crowd_playthrough(const PlayerProfile& profile, const Environment& env,
                                        std::int64_t n, std::uint64_t seed,
                                        std::uint64_t round_cap) {
  RandomStream rng{seed, 0};
  return simulate_crowd_playthrough(profile, env, n, rng, round_cap);
}

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

BatchEstimate summarize(std::span<const TrialOutcome> outcomes, std::uint64_t seed) {
  BatchEstimate batch;
  batch.trials = outcomes.size();
  batch.seed = seed;
  for (const TrialOutcome& t : outcomes) {
    if (t.capped()) {
      ++batch.capped;
      continue;
    }
    ++batch.absorbed;
    if (t.won()) ++batch.wins;
  }
  if (batch.absorbed == 0) return batch;

  const Estimate win = proportion(batch.wins, batch.absorbed);
  batch.p_win_hat = win.value;
  batch.stderr_p_win = win.standard_error;

  auto absorbed = [](const TrialOutcome& t) { return !t.capped(); };
  const auto steps = sample_mean(outcomes, absorbed,
                                 [](const TrialOutcome& t) { return static_cast<double>(t.steps); });
  const auto elapsed =
      sample_mean(outcomes, absorbed, [](const TrialOutcome& t) { return t.elapsed_s; });
  batch.mean_steps = steps->value;
  batch.stderr_steps = steps->standard_error;
  batch.mean_elapsed_s = elapsed->value;
  batch.stderr_elapsed = elapsed->standard_error;
  return batch;
}

std::vector<TrialOutcome> simulate_jump_walk_trials(JumpProbability p, const GameRules& rules,
                                                    const BatchOptions& options,
                                                    std::uint64_t step_cap) {
  return run_trials<TrialOutcome>(
      options, [&](RandomStream& rng) { return simulate_jump_walk(p, rules, rng, step_cap); });
}

std::vector<TrialOutcome> simulate_ctmc_trials(const TransitionRates& rates, const GameRules& rules,
                                               const BatchOptions& options,
                                               std::uint64_t step_cap) {
  return run_trials<TrialOutcome>(
      options, [&](RandomStream& rng) { return simulate_ctmc(rates, rules, rng, step_cap); });
}

std::vector<TrialOutcome> simulate_crowd_playthrough_trials(const PlayerProfile& profile,
                                                            const Environment& env, std::int64_t n,
                                                            const BatchOptions& options,
                                                            std::uint64_t round_cap) {
  return run_trials<TrialOutcome>(options, [&](RandomStream& rng) {
    return simulate_crowd_playthrough(profile, env, n, rng, round_cap);
  });
}

BatchEstimate simulate_jump_walk_batch(JumpProbability p, const GameRules& rules,
                                       const BatchOptions& options, std::uint64_t step_cap) {
  return summarize(simulate_jump_walk_trials(p, rules, options, step_cap), options.seed);
}

BatchEstimate simulate_ctmc_batch(const TransitionRates& rates, const GameRules& rules,
                                  const BatchOptions& options, std::uint64_t step_cap) {
  return summarize(simulate_ctmc_trials(rates, rules, options, step_cap), options.seed);
}

BatchEstimate simulate_crowd_playthrough_batch(const PlayerProfile& profile, const Environment& env,
                                               std::int64_t n, const BatchOptions& options,
                                               std::uint64_t round_cap) {
  return summarize(simulate_crowd_playthrough_trials(profile, env, n, options, round_cap),
                   options.seed);
}

RoundStatistics estimate_round_statistics(const PlayerProfile& profile, const Environment& env,
                                          const BatchOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("round count must be >= 1");
  const auto rounds = run_trials<CrowdRoundOutcome>(
      options, [&](RandomStream& rng) { return simulate_crowd_round(profile, env, rng); });

  std::uint64_t clean = 0;
  std::uint64_t up = 0;
  for (const CrowdRoundOutcome& r : rounds) {
    if (!r.duplicated) ++clean;
    if (r.net_move > 0) ++up;
  }
  const auto duration = sample_mean(
      rounds, [](const CrowdRoundOutcome&) { return true; },
      [&env](const CrowdRoundOutcome& r) { return r.first_reaction_s + env.t_d(); });
  return RoundStatistics{
      options.trials,
      clean,
      up,
      proportion(clean, options.trials),
      proportion(up, options.trials),
      *duration,
      options.seed,
  };
}

BatchEstimate estimate_collision_probability(const PlayerProfile& profile, const Environment& env,
                                             std::uint64_t trials, std::uint64_t seed,
                                             unsigned threads) {
  const RoundStatistics stats = estimate_round_statistics(profile, env, {trials, seed, threads});
  BatchEstimate batch;
  batch.trials = trials;
  batch.absorbed = trials;
  batch.wins = stats.collision_free_rounds;
  batch.p_win_hat = stats.collision_free.value;
  batch.stderr_p_win = stats.collision_free.standard_error;
  batch.mean_steps = 1.0;
  batch.mean_elapsed_s = stats.round_duration_s.value;
  batch.stderr_elapsed = stats.round_duration_s.standard_error;
  batch.seed = seed;
  return batch;
}

}  // namespace crowdplay
