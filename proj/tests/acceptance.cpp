// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/app.hpp"
#include "crowdplay/crowd.hpp"
#include "crowdplay/ruin.hpp"
#include "crowdplay/simulate.hpp"
#include "support/chain_oracle.hpp"

namespace {

using namespace crowdplay;

constexpr double kQ = 0.99;
constexpr double kLambdaH = 0.1;
constexpr double kTd = 0.15;

// Reference ratio T(1)/T(19), from direct evaluation of the crowd time formula.
constexpr double kSpeedup19 = 7.833011693485824;

struct Verdict {
  bool passed;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

bool within_sigma(double estimate, double expected, double standard_error, double sigmas = 4.0) {
  return std::abs(estimate - expected) <= sigmas * standard_error;
}

// Crowd game time written out from scratch, independent of the library.
double direct_crowd_time(int players, int n) {
  const double q_eff = kQ * std::exp(-kLambdaH * (players - 1) * kTd);
  if (2.0 * q_eff <= 1.0) return INFINITY;
  const double rate = players * kLambdaH;
  return n * (1.0 + rate * kTd) / (rate * (2.0 * q_eff - 1.0));
}

Verdict boundary() {
  const PlayerProfile profile{kQ, kLambdaH};
  const PlayerLimit limit = max_guaranteed_win_players(profile, kTd);
  const ExtendedReal t46 = expected_game_time_crowd(profile, Environment{kTd, 46}, 100);
  const ExtendedReal t47 = expected_game_time_crowd(profile, Environment{kTd, 47}, 100);
  const bool ok = limit.kind == PlayerLimit::Kind::count && limit.players == 46 && t46.is_finite() &&
                  t47.is_infinite();
  return {ok, fmt("N_max=%lld, T(46)=%s s, T(47)=%s", static_cast<long long>(limit.players),
                  to_string(t46).c_str(), to_string(t47).c_str())};
}

Verdict speedup() {
  const PlayerProfile profile{kQ, kLambdaH};
  const double t1 = expected_game_time_crowd(profile, Environment{kTd, 1}, 100).value();
  const double t19 = expected_game_time_crowd(profile, Environment{kTd, 19}, 100).value();
  const double ratio = t1 / t19;
  const bool ok = ratio >= 6.5 && ratio <= 8.5 && std::abs(ratio - kSpeedup19) <= 1e-9 * kSpeedup19;
  return {ok, fmt("T(1)=%.10g s, T(19)=%.10g s, ratio=%.16g (pinned %.16g)", t1, t19, ratio, kSpeedup19)};
}

Verdict sweep_shape() {
  const PlayerProfile profile{kQ, kLambdaH};
  bool ok = true;
  std::vector<int> argmins;
  for (int n : {10, 100, 1000}) {
    std::vector<double> times;
    for (int players = 1; players <= 46; ++players) {
      const double t = expected_game_time_crowd(profile, Environment{kTd, players}, n).value();
      ok = ok && std::abs(t - direct_crowd_time(players, n)) <= 1e-12 * t;
      times.push_back(t);
    }
    const auto best = std::min_element(times.begin(), times.end()) - times.begin();
    for (long i = 1; i <= best; ++i) ok = ok && times[i] < times[i - 1];
    for (std::size_t i = best + 1; i < times.size(); ++i) ok = ok && times[i] > times[i - 1];
    argmins.push_back(static_cast<int>(best + 1));
    ok = ok && optimal_player_count(profile, kTd, n).n_players == best + 1;
  }
  ok = ok && argmins[0] == argmins[1] && argmins[1] == argmins[2];
  return {ok, fmt("unimodal over N=1..46, argmin N=%d/%d/%d for n=10/100/1000", argmins[0], argmins[1],
                  argmins[2])};
}

Verdict oracle_grid() {
  double worst_win = 0.0;
  double worst_steps = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 8; ++m) {
      for (int i = 1; i <= 9; ++i) {
        const double p = i / 10.0;
        const auto oracle = crowdplay::testing::solve_absorbing_chain(p, n, m);
        const auto rules = GameRules::bounded(n, m);
        worst_win = std::max(worst_win, std::abs(win_probability(JumpProbability{p}, rules) - oracle.p_win));
        worst_steps = std::max(
            worst_steps, std::abs(expected_steps(JumpProbability{p}, rules).value() - oracle.expected_steps));
      }
    }
  }
  return {worst_win <= 1e-10 && worst_steps <= 1e-10,
          fmt("576 cases, max |dP|=%.3g, max |dM|=%.3g (tol 1e-10)", worst_win, worst_steps)};
}

Verdict wald() {
  std::mt19937_64 gen{20240601};
  std::uniform_real_distribution<double> pd{0.01, 0.99};
  std::uniform_int_distribution<int> kd{1, 60};
  double worst = 0.0;
  int cases = 0;
  while (cases < 1000) {
    const double p = pd(gen);
    if (p == 0.5) continue;
    const int n = kd(gen);
    const int m = kd(gen);
    const JumpProbability jp{p};
    const auto rules = GameRules::bounded(n, m);
    const double win = win_probability(jp, rules);
    const double lhs = expected_steps(jp, rules).value() * (jp.up() - jp.down());
    const double rhs = n * win - m * (1.0 - win);
    // Relative to |rhs|, floored at 1 where the drift nearly cancels.
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    ++cases;
  }
  return {worst <= 1e-9, fmt("1000 random (p, n, m), max relative residual %.3g (tol 1e-9)", worst)};
}

Verdict mc_chain() {
  const JumpProbability p{0.6};
  const auto rules = GameRules::bounded(2, 2);
  const BatchOptions options{100'000, 6, 0};
  const auto walk = simulate_jump_walk_batch(p, rules, options);
  const auto ctmc = simulate_ctmc_batch(TransitionRates{0.6, 0.4}, rules, BatchOptions{100'000, 7, 0});
  const double se_win = std::sqrt((9.0 / 13.0) * (4.0 / 13.0) / 1e5);
  const bool ok = walk.p_win_hat && walk.mean_steps && ctmc.mean_elapsed_s &&
                  within_sigma(*walk.p_win_hat, 9.0 / 13.0, std::max(se_win, walk.stderr_p_win)) &&
                  within_sigma(*walk.mean_steps, 50.0 / 13.0, walk.stderr_steps) &&
                  within_sigma(*ctmc.mean_elapsed_s, 50.0 / 13.0, ctmc.stderr_elapsed);
  return {ok, fmt("p_win_hat=%.5f vs 9/13 (se %.2g), steps=%.4f vs 50/13 (se %.2g), ctmc time=%.4f s (se %.2g)",
                  walk.p_win_hat.value_or(NAN), walk.stderr_p_win, walk.mean_steps.value_or(NAN),
                  walk.stderr_steps, ctmc.mean_elapsed_s.value_or(NAN), ctmc.stderr_elapsed)};
}

Verdict collisions() {
  const PlayerProfile profile{kQ, kLambdaH};
  bool ok = true;
  std::string detail;
  for (int players : {2, 19, 46}) {
    const Environment env{kTd, players};
    const double expected = std::exp(-kLambdaH * (players - 1) * kTd);
    const auto est = estimate_collision_probability(profile, env, 100'000, 100 + players);
    const double se = std::max(est.stderr_p_win, std::sqrt(expected * (1.0 - expected) / 1e5));
    ok = ok && est.p_win_hat && within_sigma(*est.p_win_hat, expected, se) &&
         std::abs(collision_probability(profile, env) - expected) <= 1e-15;
    detail += fmt("%sN=%d %.5f vs %.6f", detail.empty() ? "" : ", ", players, est.p_win_hat.value_or(NAN),
                  expected);
  }
  return {ok, detail + " (10^5 rounds each, 4 se)"};
}

Verdict playthrough() {
  const PlayerProfile profile{kQ, kLambdaH};
  const Environment env{kTd, 5};
  const auto batch = simulate_crowd_playthrough_batch(profile, env, 20, BatchOptions{10'000, 8, 0});
  const double closed = expected_game_time_crowd(profile, env, 20).value();
  const double rel = batch.mean_elapsed_s ? std::abs(*batch.mean_elapsed_s - closed) / closed : INFINITY;
  return {batch.capped == 0 && rel <= 0.05,
          fmt("mean %.4f s vs closed form %.4f s, relative error %.4f (tol 0.05)",
              batch.mean_elapsed_s.value_or(NAN), closed, rel)};
}

std::string invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = crowdplay::cli::run_cli(args, out, err);
  return std::to_string(code) + '\n' + out.str() + err.str();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in{path};
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv_a = (dir / "crowdplay_acceptance_a.csv").string();
  const auto csv_b = (dir / "crowdplay_acceptance_b.csv").string();
  const std::vector<std::string> simulate{"simulate", "--players", "19", "--trials", "4000", "--seed", "31"};
  const std::vector<std::string> validate{"validate", "--players", "19", "--trials", "4000", "--seed", "31"};
  auto with = [](std::vector<std::string> args, std::initializer_list<std::string> extra) {
    args.insert(args.end(), extra);
    return args;
  };

  int mismatches = 0;
  const std::string sim_serial = invoke(with(simulate, {"--threads", "1", "--per-trial", csv_a}));
  const std::string sim_parallel = invoke(with(simulate, {"--threads", "4", "--per-trial", csv_b}));
  mismatches += sim_serial != sim_parallel;
  mismatches += slurp(csv_a) != slurp(csv_b);
  mismatches += sim_serial != invoke(with(simulate, {"--threads", "4"}));
  const std::string val_serial = invoke(with(validate, {"--threads", "1"}));
  mismatches += val_serial != invoke(with(validate, {"--threads", "4"}));
  mismatches += val_serial != invoke(with(validate, {"--threads", "4"}));
  const bool seed_matters = sim_serial != invoke(with(simulate, {"--seed", "32"}));
  std::filesystem::remove(csv_a);
  std::filesystem::remove(csv_b);
  return {mismatches == 0 && seed_matters,
          fmt("simulate/validate reruns with 1 and 4 threads: %d mismatches; different seed differs: %s",
              mismatches, seed_matters ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 guaranteed-win boundary", boundary},
      {"2 seven-fold speedup", speedup},
      {"3 sweep shape", sweep_shape},
      {"4 closed form vs chain solve", oracle_grid},
      {"5 Wald identity", wald},
      {"6 Monte Carlo chain agreement", mc_chain},
      {"7 collision probability", collisions},
      {"8 end-to-end crowd agreement", playthrough},
      {"9 determinism", determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, {}};
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-32s %s [%.2fs]\n", v.passed ? "PASS" : "FAIL", c.name, v.detail.c_str(), secs);
    failures += !v.passed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
