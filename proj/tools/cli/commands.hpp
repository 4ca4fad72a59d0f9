#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cli/config.hpp"
#include "crowdplay/ruin.hpp"

namespace crowdplay::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;

inline constexpr std::string_view kSweepHeader =
    "n_players,p_collision_free,effective_quality,p_win,expected_time_s,speedup_vs_single";

/// Shortest decimal string that parses back to the same double; "inf" for
/// +infinity.
std::string format_number(double value);
std::string format_number(const ExtendedReal& value);

/// "1h 2m 3.5s" style rendering for human-facing reports.
std::string format_duration(const ExtendedReal& seconds);

/// Closed-form view of one crowd size under the run's parameters. With a
/// finite losing distance the effective chain is solved with both
/// boundaries; otherwise the no-losing-state crowd formulas apply.
struct CrowdEvaluation {
  std::int64_t n_players;
  double p_collision_free;
  double effective_quality;
  std::optional<TransitionRates> rates;  ///< empty when q' underflows
  double time_per_move_s;
  double p_win;
  ExtendedReal expected_time_s;
  std::optional<ExtendedReal> expected_time_to_win_s;  ///< finite m only
};

CrowdEvaluation evaluate_crowd(const RunConfig& config, std::int64_t n_players);

struct SweepRow {
  std::int64_t n_players;
  double p_collision_free;
  double effective_quality;
  double p_win;
  ExtendedReal expected_time_s;
  double speedup_vs_single;
};

std::vector<SweepRow> sweep_rows(const RunConfig& config);
std::string format_sweep_row(const SweepRow& row);

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes the report to `out` and, when `per_trial` is set, one CSV line per
/// trial to `trial_csv`.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err,
                 std::ostream* trial_csv);

struct CheckResult {
  std::string name;
  double estimate = 0.0;
  double expected = 0.0;
  double standard_error = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

/// Test-only knobs for exercising the validation harness itself.
struct ValidationHooks {
  /// Added to every closed-form value before comparison.
  double oracle_offset = 0.0;
};

inline constexpr double kSigmaGate = 4.0;

std::vector<CheckResult> run_validation(const RunConfig& config, const ValidationHooks& hooks = {});

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err,
                 const ValidationHooks& hooks = {});

}  // namespace crowdplay::cli
