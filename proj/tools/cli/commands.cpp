#include "cli/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "crowdplay/crowd.hpp"
#include "crowdplay/simulate.hpp"

namespace crowdplay::cli {

namespace {

constexpr int kLabelWidth = 40;
constexpr std::int64_t kOptimalSearchLimit = 10'000'000;

PlayerProfile profile_of(const RunConfig& config) {
  return PlayerProfile{config.quality, config.lambda_h};
}

GameRules rules_of(const RunConfig& config) {
  return config.m ? GameRules::bounded(config.n, *config.m) : GameRules::unbounded(config.n);
}

std::string describe_m(const RunConfig& config) {
  return config.m ? std::to_string(*config.m) : "inf";
}

void line(std::ostream& out, std::string_view label, std::string_view value) {
  out << "  " << std::left << std::setw(kLabelWidth) << label << value << '\n';
}

void print_parameters(std::ostream& out, const RunConfig& config) {
  out << "  q = " << format_number(config.quality) << ", lambda_h = "
      << format_number(config.lambda_h) << " 1/s, t_d = " << format_number(config.t_d)
      << " s, n = " << config.n << ", m = " << describe_m(config) << '\n';
}

int require_single_crowd(const RunConfig& config, std::string_view command, std::ostream& err) {
  if (config.players.single()) return kExitSuccess;
  err << command << ": --players must be a single value, not a range\n";
  return kExitConfigError;
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value) && value > 0) return "inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_number(const ExtendedReal& value) { return format_number(value.as_double()); }

std::string format_duration(const ExtendedReal& seconds) {
  if (seconds.is_infinite()) return "never (infinite)";
  double s = seconds.value();
  std::ostringstream text;
  if (s < 60.0) {
    text << std::setprecision(4) << s << 's';
    return text.str();
  }
  const auto hours = static_cast<long long>(s / 3600.0);
  s -= static_cast<double>(hours) * 3600.0;
  const auto minutes = static_cast<long long>(s / 60.0);
  s -= static_cast<double>(minutes) * 60.0;
  if (hours > 0) text << hours << "h ";
  text << minutes << "m " << std::fixed << std::setprecision(1) << s << 's';
  return text.str();
}

CrowdEvaluation evaluate_crowd(const RunConfig& config, std::int64_t n_players) {
  const PlayerProfile profile = profile_of(config);
  const Environment env{config.t_d, n_players};
  const double crowd_rate = static_cast<double>(n_players) * config.lambda_h;

  CrowdEvaluation eval{
      n_players,
      collision_probability(profile, env),
      effective_quality(profile, env),
      std::nullopt,
      1.0 / crowd_rate + config.t_d,
      0.0,
      ExtendedReal::infinite(),
      std::nullopt,
  };
  if (eval.effective_quality > 0.0) eval.rates = n_player_effective_model(profile, env).rates;

  if (!config.m) {
    eval.p_win = win_probability_crowd(profile, env, config.n);
    eval.expected_time_s = expected_game_time_crowd(profile, env, config.n);
    return eval;
  }

  const auto rules = GameRules::bounded(config.n, *config.m);
  if (eval.effective_quality == 0.0) {
    // Every round is a bad move: straight down to the losing state.
    eval.expected_time_s = ExtendedReal{static_cast<double>(*config.m) * eval.time_per_move_s};
    eval.expected_time_to_win_s = ExtendedReal::infinite();
    return eval;
  }
  const JumpProbability p{eval.effective_quality};
  eval.p_win = win_probability(p, rules);
  eval.expected_time_s = expected_steps(p, rules) * eval.time_per_move_s;
  eval.expected_time_to_win_s =
      eval.p_win == 0.0 ? ExtendedReal::infinite() : eval.expected_time_s / eval.p_win;
  return eval;
}

std::vector<SweepRow> sweep_rows(const RunConfig& config) {
  const ExtendedReal single = evaluate_crowd(config, 1).expected_time_s;
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(config.players.hi - config.players.lo + 1));
  for (std::int64_t players = config.players.lo; players <= config.players.hi; ++players) {
    const CrowdEvaluation eval = evaluate_crowd(config, players);
    double speedup = 1.0;
    if (players != 1) {
      if (single.is_finite()) {
        speedup = eval.expected_time_s.is_finite()
                      ? single.value() / eval.expected_time_s.value()
                      : 0.0;
      } else {
        // A lone player never finishes and neither does a larger crowd.
        speedup = 1.0;
      }
    }
    rows.push_back({players, eval.p_collision_free, eval.effective_quality, eval.p_win,
                    eval.expected_time_s, speedup});
  }
  return rows;
}

std::string format_sweep_row(const SweepRow& row) {
  return std::to_string(row.n_players) + ',' + format_number(row.p_collision_free) + ',' +
         format_number(row.effective_quality) + ',' + format_number(row.p_win) + ',' +
         format_number(row.expected_time_s) + ',' + format_number(row.speedup_vs_single);
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (const int rc = require_single_crowd(config, "analyze", err); rc != kExitSuccess) return rc;
  const std::int64_t players = config.players.lo;
  const CrowdEvaluation eval = evaluate_crowd(config, players);
  const PlayerProfile profile = profile_of(config);

  out << "crowd analysis (N = " << players << (players == 1 ? " player)\n" : " players)\n");
  print_parameters(out, config);
  line(out, "collision-free probability P_c", format_number(eval.p_collision_free));
  line(out, "effective quality q' = q * P_c", format_number(eval.effective_quality));
  line(out, "good-move rate lambda (1/s)", eval.rates ? format_number(eval.rates->lambda()) : "n/a");
  line(out, "bad-move rate mu (1/s)", eval.rates ? format_number(eval.rates->mu()) : "n/a");
  line(out, "time per move (s)", format_number(eval.time_per_move_s));
  line(out, config.m ? "win probability" : "win probability (no losing state)",
       format_number(eval.p_win));
  line(out, "expected game time (s)",
       format_number(eval.expected_time_s) + "  [" + format_duration(eval.expected_time_s) + "]");
  if (eval.expected_time_to_win_s) {
    line(out, "expected time to win with restarts (s)",
         format_number(*eval.expected_time_to_win_s) + "  [" +
             format_duration(*eval.expected_time_to_win_s) + "]");
  }

  PlayerLimit limit = PlayerLimit::unlimited();
  try {
    limit = max_guaranteed_win_players(profile, config.t_d);
  } catch (const std::overflow_error&) {
    line(out, "max players with guaranteed win (N_max)", "too large to represent");
    return kExitSuccess;
  }
  switch (limit.kind) {
    case PlayerLimit::Kind::count: {
      line(out, "max players with guaranteed win (N_max)", std::to_string(limit.players));
      if (limit.players > kOptimalSearchLimit) {
        line(out, "optimal player count",
             "not searched (N_max exceeds " + std::to_string(kOptimalSearchLimit) + ")");
        break;
      }
      const OptimalCrowd best = optimal_player_count(profile, config.t_d, config.n);
      line(out, "optimal player count",
           std::to_string(best.n_players) + "  (expected game time " +
               format_number(best.time_s) + " s)");
      break;
    }
    case PlayerLimit::Kind::unbounded:
      line(out, "max players with guaranteed win (N_max)", "unbounded (no observation delay)");
      line(out, "optimal player count", "unbounded (game time decreases with every player)");
      break;
    case PlayerLimit::Kind::no_guarantee:
      line(out, "max players with guaranteed win (N_max)",
           "none (NoGuarantee: quality <= 1/2, even one player may never win)");
      line(out, "optimal player count", "none (NoGuarantee)");
      break;
  }
  return kExitSuccess;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream&) {
  out << kSweepHeader << '\n';
  for (const SweepRow& row : sweep_rows(config)) out << format_sweep_row(row) << '\n';
  return kExitSuccess;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err,
                 std::ostream* trial_csv) {
  if (const int rc = require_single_crowd(config, "simulate", err); rc != kExitSuccess) return rc;
  if (config.m) {
    err << "simulate: the crowd playthrough has no losing state; --m is ignored\n";
  }
  const PlayerProfile profile = profile_of(config);
  const Environment env{config.t_d, config.players.lo};
  const BatchOptions options{config.trials, config.seed, config.threads};
  const auto trials = simulate_crowd_playthrough_trials(profile, env, config.n, options, config.round_cap);
  const BatchEstimate batch = summarize(trials, config.seed);
  const ExtendedReal closed = expected_game_time_crowd(profile, env, config.n);

  out << "crowd playthrough simulation (N = " << env.n_players() << ", n = " << config.n << ")\n";
  print_parameters(out, config);
  line(out, "trials", std::to_string(batch.trials));
  line(out, "seed", std::to_string(batch.seed));
  line(out, "generator", batch.generator);
  line(out, "round cap", std::to_string(config.round_cap));
  line(out, "absorbed trials", std::to_string(batch.absorbed));
  line(out, "capped trials", std::to_string(batch.capped));
  if (batch.p_win_hat) {
    line(out, "p_win_hat", format_number(*batch.p_win_hat) + " +- " + format_number(batch.stderr_p_win));
    line(out, "mean rounds", format_number(*batch.mean_steps) + " +- " + format_number(batch.stderr_steps));
    line(out, "mean game time (s)",
         format_number(*batch.mean_elapsed_s) + " +- " + format_number(batch.stderr_elapsed));
  } else {
    line(out, "p_win_hat", "n/a (no absorbed trials)");
    line(out, "mean rounds", "n/a");
    line(out, "mean game time (s)", "n/a");
  }
  line(out, "closed-form game time (s)", format_number(closed));
  if (batch.mean_elapsed_s && closed.is_finite()) {
    line(out, "relative difference",
         format_number((*batch.mean_elapsed_s - closed.value()) / closed.value()));
  }

  if (trial_csv) {
    *trial_csv << "trial,status,rounds,elapsed_s\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const TrialOutcome& t = trials[i];
      const char* status = t.won() ? "won" : t.capped() ? "capped" : "lost";
      *trial_csv << i << ',' << status << ',' << t.steps << ',' << format_number(t.elapsed_s) << '\n';
    }
  }
  return kExitSuccess;
}

namespace {

// Seed domains for the independent validation experiments.
enum : std::uint64_t { kJumpDomain = 1, kCtmcDomain, kRoundDomain, kPlaythroughDomain };

CheckResult gate(std::string name, double estimate, double expected, double standard_error,
                 const ValidationHooks& hooks) {
  expected += hooks.oracle_offset;
  const bool passed = std::abs(estimate - expected) <= kSigmaGate * standard_error;
  return {std::move(name), estimate, expected, standard_error, passed, false, {}};
}

CheckResult skipped(std::string name, std::string why) {
  CheckResult r;
  r.name = std::move(name);
  r.skipped = true;
  r.passed = true;
  r.note = std::move(why);
  return r;
}

CheckResult missing(std::string name) {
  CheckResult r;
  r.name = std::move(name);
  r.note = "no absorbed trials";
  return r;
}

void note_capped(CheckResult& check, std::uint64_t capped) {
  if (capped > 0) check.note = std::to_string(capped) + " trials hit the cap and were excluded";
}

double binomial_se(double p, std::uint64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig& config, const ValidationHooks& hooks) {
  if (!config.players.single()) throw ConfigError("--players: validate needs a single crowd size");
  const PlayerProfile profile = profile_of(config);
  const Environment env{config.t_d, config.players.lo};
  const GameRules rules = rules_of(config);
  const double q_eff = effective_quality(profile, env);
  auto options = [&](std::uint64_t domain) {
    return BatchOptions{config.trials, derive_seed(config.seed, domain), config.threads};
  };

  std::vector<CheckResult> checks;

  // Effective chain: jump walk and continuous-time walk against ruin analytics.
  const bool chain_diverges = !rules.has_losing_state() && q_eff <= 0.5;
  if (q_eff <= 0.0 || q_eff >= 1.0) {
    checks.push_back(skipped("chain p_win", "effective quality outside (0, 1)"));
  } else if (chain_diverges) {
    checks.push_back(skipped("chain p_win", "expected duration is infinite (q' <= 1/2, no losing state)"));
    checks.push_back(skipped("chain mean steps", "expected duration is infinite"));
    checks.push_back(skipped("ctmc mean time", "expected duration is infinite"));
  } else {
    const JumpProbability p{q_eff};
    const auto model = n_player_effective_model(profile, env);
    const double win = win_probability(p, rules);
    const double steps = expected_steps(p, rules).value();
    const double chain_time = expected_game_time(model.rates, rules).value();

    const auto jump = simulate_jump_walk_batch(p, rules, options(kJumpDomain), config.round_cap);
    if (jump.p_win_hat) {
      checks.push_back(gate("chain p_win", *jump.p_win_hat, win,
                            std::max(jump.stderr_p_win, binomial_se(win, jump.absorbed)), hooks));
      checks.push_back(gate("chain mean steps", *jump.mean_steps, steps, jump.stderr_steps, hooks));
      note_capped(checks.back(), jump.capped);
    } else {
      checks.push_back(missing("chain p_win"));
      checks.push_back(missing("chain mean steps"));
    }
    const auto ctmc = simulate_ctmc_batch(model.rates, rules, options(kCtmcDomain), config.round_cap);
    if (ctmc.mean_elapsed_s) {
      checks.push_back(gate("ctmc mean time", *ctmc.mean_elapsed_s, chain_time, ctmc.stderr_elapsed, hooks));
      note_capped(checks.back(), ctmc.capped);
    } else {
      checks.push_back(missing("ctmc mean time"));
    }
  }

  // Single rounds against the collision and effective-quality formulas.
  const auto rounds = estimate_round_statistics(profile, env, options(kRoundDomain));
  const double p_c = collision_probability(profile, env);
  checks.push_back(gate("round collision-free", rounds.collision_free.value, p_c,
                        std::max(rounds.collision_free.standard_error, binomial_se(p_c, rounds.rounds)),
                        hooks));
  checks.push_back(gate("round up-move", rounds.up_move.value, q_eff,
                        std::max(rounds.up_move.standard_error, binomial_se(q_eff, rounds.rounds)),
                        hooks));
  const double round_time = 1.0 / (static_cast<double>(env.n_players()) * config.lambda_h) + config.t_d;
  checks.push_back(gate("round duration", rounds.round_duration_s.value, round_time,
                        rounds.round_duration_s.standard_error, hooks));

  // Whole playthroughs against the crowd game-time formula.
  const ExtendedReal crowd_time = expected_game_time_crowd(profile, env, config.n);
  if (crowd_time.is_infinite()) {
    checks.push_back(skipped("playthrough mean time", "expected game time is infinite (q' <= 1/2)"));
  } else {
    const auto play = simulate_crowd_playthrough_batch(profile, env, config.n,
                                                       options(kPlaythroughDomain), config.round_cap);
    if (play.mean_elapsed_s) {
      checks.push_back(gate("playthrough mean time", *play.mean_elapsed_s, crowd_time.value(),
                            play.stderr_elapsed, hooks));
      note_capped(checks.back(), play.capped);
    } else {
      checks.push_back(missing("playthrough mean time"));
    }
  }
  return checks;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err,
                 const ValidationHooks& hooks) {
  if (const int rc = require_single_crowd(config, "validate", err); rc != kExitSuccess) return rc;
  if (config.trials < 100) {
    err << "validate: warning: " << config.trials
        << " trials give standard errors too wide to be meaningful (use >= 100)\n";
  }
  const auto checks = run_validation(config, hooks);

  out << "validation (N = " << config.players.lo << ", trials = " << config.trials
      << ", seed = " << config.seed << ")\n";
  print_parameters(out, config);
  out << "  generator: " << RandomStream::generator_name << '\n';
  out << "  gate: |estimate - closed form| <= " << format_number(kSigmaGate) << " * stderr\n";

  std::size_t failed = 0;
  std::size_t skipped_count = 0;
  for (const CheckResult& c : checks) {
    out << (c.skipped ? "SKIP" : c.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(24)
        << c.name;
    if (!c.skipped && c.note != "no absorbed trials") {
      out << " estimate=" << format_number(c.estimate) << " closed_form=" << format_number(c.expected)
          << " stderr=" << format_number(c.standard_error);
    }
    if (!c.note.empty()) out << "  (" << c.note << ')';
    out << '\n';
    if (c.skipped) ++skipped_count;
    if (!c.passed) ++failed;
  }
  out << checks.size() << " checks: " << checks.size() - failed - skipped_count << " passed, "
      << failed << " failed, " << skipped_count << " skipped\n";
  return failed == 0 ? kExitSuccess : kExitValidationFailed;
}

}  // namespace crowdplay::cli
