// Seeded Monte Carlo samplers for the birth-death chain and for the
// agent-level crowd model. Every sampler is a pure function of its
// parameters and random stream.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "crowdplay/crowd.hpp"
#include "crowdplay/random_stream.hpp"
#include "crowdplay/ruin.hpp"

namespace crowdplay {

inline constexpr std::uint64_t kDefaultStepCap = 1'000'000;
inline constexpr std::uint64_t kDefaultRoundCap = 1'000'000;

enum class Absorption { won, lost, capped };

struct TrialOutcome {
  Absorption status;
  std::uint64_t steps;
  double elapsed_s;

  bool won() const noexcept { return status == Absorption::won; }
  bool capped() const noexcept { return status == Absorption::capped; }

  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// Aggregate over a batch of trials. Capped trials are counted but excluded
/// from every mean; the means are empty when no trial was absorbed.
struct BatchEstimate {
  std::uint64_t trials = 0;
  std::uint64_t absorbed = 0;
  std::uint64_t capped = 0;
  std::uint64_t wins = 0;
  std::optional<double> p_win_hat;
  std::optional<double> mean_steps;
  std::optional<double> mean_elapsed_s;
  double stderr_p_win = 0.0;
  double stderr_steps = 0.0;
  double stderr_elapsed = 0.0;
  std::uint64_t seed = 0;
  std::string_view generator = RandomStream::generator_name;
};

/// One observe-react-settle cycle of the crowd.
struct CrowdRoundOutcome {
  double first_reaction_s;
  /// Time between the first and second inputs; empty for a single player.
  std::optional<double> gap_to_second_s;
  bool duplicated;
  int net_move;
};

struct BatchOptions {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Walk on the jump chain from 0 until n or -m. elapsed_s is always 0.
/// The step cap only applies without a losing state.
TrialOutcome simulate_jump_walk(JumpProbability p, const GameRules& rules, RandomStream& rng,
                                std::uint64_t step_cap = kDefaultStepCap);
TrialOutcome simulate_jump_walk(JumpProbability p, const GameRules& rules, std::uint64_t seed,
                                std::uint64_t step_cap = kDefaultStepCap);

/// The same walk with Exp(lambda + mu) holding times accumulated into
/// elapsed_s.
TrialOutcome simulate_ctmc(const TransitionRates& rates, const GameRules& rules,
                           RandomStream& rng, std::uint64_t step_cap = kDefaultStepCap);
TrialOutcome simulate_ctmc(const TransitionRates& rates, const GameRules& rules,
                           std::uint64_t seed, std::uint64_t step_cap = kDefaultStepCap);

/// Every player draws an Exp(lambda_h) reaction time. The earliest input is
/// correct with probability `quality`; any other input within t_d of it
/// spoils the round. A spoiled or incorrect round is a single -1 move.
CrowdRoundOutcome simulate_crowd_round(const PlayerProfile& profile, const Environment& env,
                                       RandomStream& rng);
CrowdRoundOutcome simulate_crowd_round(const PlayerProfile& profile, const Environment& env,
                                       std::uint64_t seed);

/// Rounds repeat from position 0 until position n (there is no losing
/// floor). Each round costs its first reaction time plus t_d. Hitting
/// round_cap yields Absorption::capped.
TrialOutcome simulate_crowd_playthrough(const PlayerProfile& profile, const Environment& env,
                                        std::int64_t n, RandomStream& rng,
                                        std::uint64_t round_cap = kDefaultRoundCap);
TrialOutcome simulate_crowd_playthrough(const PlayerProfile& profile, const Environment& env,
                                        std::int64_t n, std::uint64_t seed,
                                        std::uint64_t round_cap = kDefaultRoundCap);

unsigned resolve_threads(unsigned requested) noexcept;

/// Runs trial(rng) for trial indices 0..trials-1, each on RandomStream(seed,
/// index), and returns the results in index order regardless of threading.
template <typename Result, typename TrialFn>
std::vector<Result> run_trials(const BatchOptions& options, TrialFn&& trial) {
  std::vector<Result> results(options.trials);
  const auto workers = static_cast<std::uint64_t>(
      std::min<std::uint64_t>(resolve_threads(options.threads), std::max<std::uint64_t>(1, options.trials)));
  auto work = [&](std::uint64_t first, std::uint64_t last) {
    for (std::uint64_t i = first; i < last; ++i) {
      RandomStream rng{options.seed, i};
      results[i] = trial(rng);
    }
  };
  if (workers <= 1) {
    work(0, options.trials);
    return results;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (options.trials + workers - 1) / workers;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t first = w * chunk;
      const std::uint64_t last = std::min(options.trials, first + chunk);
      if (first >= last) break;
      pool.emplace_back(work, first, last);
    }
  }
  return results;
}

/// Aggregates in index order, so identical inputs give bit-identical output.
BatchEstimate summarize(std::span<const TrialOutcome> outcomes, std::uint64_t seed);

std::vector<TrialOutcome> simulate_jump_walk_trials(JumpProbability p, const GameRules& rules,
                                                    const BatchOptions& options,
                                                    std::uint64_t step_cap = kDefaultStepCap);
std::vector<TrialOutcome> simulate_ctmc_trials(const TransitionRates& rates, const GameRules& rules,
                                               const BatchOptions& options,
                                               std::uint64_t step_cap = kDefaultStepCap);
std::vector<TrialOutcome> simulate_crowd_playthrough_trials(const PlayerProfile& profile,
                                                            const Environment& env, std::int64_t n,
                                                            const BatchOptions& options,
                                                            std::uint64_t round_cap = kDefaultRoundCap);

BatchEstimate simulate_jump_walk_batch(JumpProbability p, const GameRules& rules,
                                       const BatchOptions& options,
                                       std::uint64_t step_cap = kDefaultStepCap);
BatchEstimate simulate_ctmc_batch(const TransitionRates& rates, const GameRules& rules,
                                  const BatchOptions& options,
                                  std::uint64_t step_cap = kDefaultStepCap);
BatchEstimate simulate_crowd_playthrough_batch(const PlayerProfile& profile, const Environment& env,
                                               std::int64_t n, const BatchOptions& options,
                                               std::uint64_t round_cap = kDefaultRoundCap);

/// A sample proportion or sample mean with its standard error.
struct Estimate {
  double value;
  double standard_error;
};

struct RoundStatistics {
  std::uint64_t rounds;
  std::uint64_t collision_free_rounds;
  std::uint64_t up_rounds;
  Estimate collision_free;
  Estimate up_move;
  /// first_reaction_s + t_d
  Estimate round_duration_s;
  std::uint64_t seed;
};

RoundStatistics estimate_round_statistics(const PlayerProfile& profile, const Environment& env,
                                          const BatchOptions& options);

/// Each round is one trial; a collision-free round counts as a win, so
/// p_win_hat is the collision-free frequency and stderr_p_win its binomial
/// standard error. mean_elapsed_s is the mean round duration.
BatchEstimate estimate_collision_probability(const PlayerProfile& profile, const Environment& env,
                                             std::uint64_t trials, std::uint64_t seed,
                                             unsigned threads = 0);

}  // namespace crowdplay
