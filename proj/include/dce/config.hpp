#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dce/trajectory.hpp"

namespace dce {

struct Numerics {
  /// Time step of the output grid, in units of R0.
  double time_step = 0.01;
  /// Window; defaults to [start - (R0 + tau), end + 3 (Rf - Lf)].
  std::optional<double> t_start, t_end;
  int spatial_points = 2001;
  double energy_tol = 1e-8;
  double moore_tol = 1e-12;
  double effective_tol = 1e-8;
  int moore_samples = 1001;
  /// Exact solver on the effective mirrors, compared with the adiabatic
  /// functions.
  bool cross_check = false;
  bool critical_tau = false;
  double critical_tau_lo = 0.05;
  double critical_tau_hi = 2.0;
  double critical_tau_tol = 1e-3;
};

struct Outputs {
  std::filesystem::path directory = "out";
  bool trajectories = true;
  bool moore = true;
  bool energy = true;
};

/// One scenario as read from an INI file.
///
///   [scenario]  family, tau, temperatures (list of T R0)
///   [geometry]  L0, Lf, R0, eps
///   [numerics]  see Numerics
///   [outputs]   directory, trajectories, moore, energy
///   [sweep]     taus
///   [custom]    left, right: "start end c0 c1 ...; start end ..." with
///               the position a polynomial in s = (t - start)/(end - start).
///               Family custom without segments blends L0 -> Lf and
///               R0 -> R0 (1 - eps) over [0, tau] with no family constraint.
struct RunConfig {
  Geometry geometry;
  double tau = 1;
  std::vector<double> temperatures{0.0};
  Numerics numerics;
  Outputs outputs;
  std::vector<double> sweep_taus;
  std::vector<Segment> custom_left, custom_right;

  /// True when the mirrors follow explicit [custom] segments, so tau does
  /// not control the motion.
  bool explicit_segments() const { return !custom_left.empty() || !custom_right.empty(); }
  /// Reference trajectories for the configured duration.
  TrajectoryPair reference() const { return reference(tau); }
  TrajectoryPair reference(double tau) const;
};

/// Throws ConfigError on unknown keys, malformed values or inconsistent
/// geometry.
RunConfig load_config(const std::filesystem::path& file);
RunConfig parse_config(const std::string& text);

std::vector<double> parse_list(const std::string& text);

}  // namespace dce
