#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dce/config.hpp"
#include "dce/energy.hpp"
#include "dce/moore_adiabatic.hpp"
#include "dce/moore_exact.hpp"
#include "dce/sta.hpp"

namespace dce {

struct RunOptions {
  bool strict = false;
  int threads = 1;
};

/// Everything computed for one scenario.
struct ScenarioResult {
  RunConfig config;
  TrajectoryPair reference;
  /// Null when the reference mirrors themselves are superluminal.
  std::shared_ptr<const ExactMoore> exact;
  bool reference_superluminal = false;
  std::shared_ptr<const AdiabaticMoore> adiabatic;
  EffectiveTrajectory eff_left, eff_right;
  /// Present when both effective trajectories exist everywhere.
  std::optional<TrajectoryPair> effective;
  LimitTrajectory lim_left, lim_right;
  double v_lim = 0;
  double R_c = 0;
  bool continuity = false;

  std::vector<double> times;
  EnergyRecord energy;

  Residuals exact_residual;
  Residuals adiabatic_residual;
  double effective_residual = 0;
  /// Sup |F_exact - F_ad|, |G_exact - G_ad| with the exact solver driven by
  /// the effective mirrors; only with numerics.cross_check.
  std::optional<double> cross_residual;
  double max_speed_left = 0;
  double max_speed_right = 0;
  bool superluminal = false;
  std::optional<CriticalTau> tau_c;

  std::vector<std::string> failed_checks;
  std::vector<std::string> notes;
  bool ok() const { return failed_checks.empty(); }
};

/// Window [t_start, t_end] of the output grid.
std::pair<double, double> run_window(const RunConfig& config, const TrajectoryPair& reference);

ScenarioResult simulate(const RunConfig& config, const RunOptions& opt = {});

/// Writes the enabled CSV files and summary.ini into `dir`.
void write_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

struct SweepRow {
  double tau = 0;
  double adiabatic_residual = 0;
  double max_effective_speed = 0;
  double limit_distance_left = 0;
  double limit_distance_right = 0;
  int effective_failures = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Least-squares slope of log(residual) against log(tau).
  double residual_slope = 0;
};

/// Requires at least three ascending durations in config.sweep_taus.
SweepResult sweep_tau(const RunConfig& config, const RunOptions& opt = {});
void write_sweep(const SweepResult& result, const std::filesystem::path& dir);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// 17 significant digits, the fixed format of every data file.
std::string format_number(double v);

}  // namespace dce
