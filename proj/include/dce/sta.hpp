#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dce/moore_adiabatic.hpp"
#include "dce/moore_exact.hpp"
#include "dce/trajectory.hpp"

namespace dce {

/// Interval searched for an effective mirror position.
struct Bracket {
  double lo;
  double hi;
};

/// Default search interval [min(L0, Lf) - d0, max(R0, Rf) + d0].
Bracket default_bracket(const TrajectoryPair& reference);

/// Position x solving G_ad(t + x) - F_ad(t - x) = 0 (left) or 2 (right).
/// The bracket grows geometrically when it does not straddle the root.
/// Throws NoEffectivePosition when no sign change is found, and
/// AdiabaticOrderViolation when the equation is not increasing in x at the
/// root.
double effective_position(const AdiabaticMoore& am, Mirror side, double t,
                          std::optional<Bracket> bracket = std::nullopt);

/// dx/dt of the effective position at (t, x), from the implicit function
/// theorem applied to the defining equation.
double effective_velocity(const AdiabaticMoore& am, double t, double x);

struct EffectiveOptions {
  /// Sampling step; 0 selects tau / 512.
  double step = 0;
  /// Step is halved until cubic interpolation of the coarse table reproduces
  /// the new midpoints to this tolerance.
  double refine_tol = 1e-8;
  int max_refinements = 6;
};

/// Effective trajectory of one mirror sampled on a uniform grid that covers
/// the whole window in which it can differ from the reference endpoints.
struct EffectiveTrajectory {
  Mirror side = Mirror::right;
  Eigen::VectorXd times;
  Eigen::VectorXd positions;
  Eigen::VectorXd velocities;
  double initial = 0;
  double final = 0;
  /// Samples where no physical effective position exists (left as NaN).
  int failures = 0;
  std::string first_failure;
  /// True when the step-halving criterion was met.
  bool converged = false;

  /// Cubic Hermite interpolation of the samples; constant outside the table.
  double eval(double t) const;
  /// Largest speed over the samples: analytic slopes and chord slopes.
  double max_speed() const;
  bool realizable() const { return failures == 0 && max_speed() < 1.0; }
  /// C1 piecewise-cubic mirror path through the samples.
  MirrorPath to_path() const;
};

EffectiveTrajectory build_effective(const AdiabaticMoore& am, Mirror side,
                                    const EffectiveOptions& opt = {});

/// Pair of effective paths usable as mirror motion for the exact solver.
TrajectoryPair effective_pair(const EffectiveTrajectory& left, const EffectiveTrajectory& right);

/// Sup over the table of |G_ad(t + x) - F_ad(t - x) - c|.
double effective_residual(const AdiabaticMoore& am, const EffectiveTrajectory& eff);

/// Limit of the effective trajectories for an instantaneous reference jump
/// at t = 0: constant initial position, a uniform-velocity middle piece
/// (replaced by the light cone |x| = |t| where the uniform piece would leave
/// the region in which it solves the equation), constant final position.
struct AffinePiece {
  double t_begin;
  double t_end;
  double intercept;
  double slope;
};

struct LimitTrajectory {
  Mirror side = Mirror::right;
  double velocity = 0;
  /// Intercept of the uniform-velocity piece.
  double intercept = 0;
  std::vector<AffinePiece> pieces;

  double eval(double t) const;
  /// Times where the piece changes, including jumps.
  std::vector<double> breakpoints() const;
  bool continuous(double tol = 1e-12) const;
};

/// -[(R0 - L0) - (Rf - Lf)] / [(R0 - L0) + (Rf - Lf)].
double limit_velocity(double L0, double Lf, double R0, double Rf);
/// [2 d0 df + Lf d0 + L0 df] / (d0 + df).
double limit_right_intercept(double L0, double Lf, double R0, double Rf);
/// [Lf d0 + L0 df] / (d0 + df).
double limit_left_intercept(double L0, double Lf, double R0, double Rf);

/// Throws GeometryError for a degenerate cavity.
std::pair<LimitTrajectory, LimitTrajectory> limit_trajectory(double L0, double Lf, double R0,
                                                             double Rf);

/// True iff Lf R0 = L0 Rf within relative tolerance 1e-12.
bool continuity_check(double L0, double Lf, double R0, double Rf);

/// Sup distance between an effective and a limit trajectory on the effective
/// table, skipping |t - b| <= exclusion around each limit breakpoint b.
double limit_distance(const EffectiveTrajectory& eff, const LimitTrajectory& lim,
                      double exclusion);

/// Largest effective speed of both mirrors for the reference motion of
/// `geometry` at duration tau. Infinite when a position fails to exist.
double max_effective_speed(const Geometry& geometry, double tau,
                           const EffectiveOptions& opt = {});

struct CriticalTau {
  enum class Outcome { found, all_physical, none_physical };
  Outcome outcome = Outcome::found;
  double tau = 0;
  int evaluations = 0;
};

/// Bisects on tau for the duration where the largest effective speed crosses
/// the speed of light, to `tol` in tau.
CriticalTau critical_tau(const Geometry& geometry, double tau_lo, double tau_hi,
                         double tol = 1e-3, const EffectiveOptions& opt = {});

}  // namespace dce
