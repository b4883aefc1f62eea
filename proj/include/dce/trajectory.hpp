#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dce/jet.hpp"

namespace dce {

/// Seventh-degree smoothstep 35x^4 - 84x^5 + 70x^6 - 20x^7 and its first
/// three derivatives. Clamped outside [0, 1]: 0 below, 1 above, with all
/// derivatives zero there.
double smoothstep7(double x, int order = 0);

/// One polynomial piece on [start, end]. With s = (t - start)/(end - start)
/// and p(s) = sum_k shape[k] s^k the position is from*(1 - p) + to*p, so a
/// shape with p(0) = 0 and p(1) = 1 hits both endpoint levels exactly.
/// Plain polynomials use from = 0, to = 1.
struct Segment {
  double start = 0;
  double end = 1;
  double from = 0;
  double to = 1;
  Eigen::VectorXd shape;

  Jet jet(double t) const;
};

/// Mirror position as a piecewise polynomial in time, constant before the
/// first segment and after the last one. Immutable once built.
class MirrorPath {
 public:
  /// A mirror at rest at `position` for all times.
  explicit MirrorPath(double position = 0.0);

  /// Contiguous segments; value and derivatives up to `continuity_order` must
  /// match at every joint (including the flat ends) within `tol` relative.
  /// Throws GeometryError otherwise.
  static MirrorPath from_segments(std::vector<Segment> segments, int continuity_order = 3,
                                  double tol = 1e-9);

  double eval(double t, int order = 0) const;
  Jet jet(double t) const;

  double initial() const { return initial_; }
  double final() const { return final_; }
  bool is_static() const { return segments_.empty(); }
  /// Times where the polynomial piece changes (segment starts plus the last end).
  std::span<const double> breakpoints() const { return breaks_; }
  /// First and last breakpoint; equal to 0 for a static path.
  double motion_start() const { return breaks_.empty() ? 0.0 : breaks_.front(); }
  double motion_end() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
  const std::vector<Segment>& segments() const { return segments_; }

  /// Conservative bounds of the position over all times.
  double min_position() const { return min_; }
  double max_position() const { return max_; }

 private:
  std::vector<Segment> segments_;
  std::vector<double> breaks_;
  double initial_ = 0;
  double final_ = 0;
  double min_ = 0;
  double max_ = 0;
};

enum class Family { contraction, expansion, rigid, custom };

Family parse_family(std::string_view name);
std::string_view to_string(Family f);

/// Left and right mirror paths with the endpoint geometry. The motion is
/// confined to [motion_start(), motion_end()].
struct TrajectoryPair {
  MirrorPath left;
  MirrorPath right;
  double L0 = 0, Lf = 0, R0 = 1, Rf = 1;
  double tau = 0;

  double d0() const { return R0 - L0; }
  double df() const { return Rf - Lf; }
  double motion_start() const;
  double motion_end() const;
  double length(double t) const { return right.eval(t) - left.eval(t); }
};

/// Builds a pair from arbitrary paths; checks R(t) > L(t) on a dense grid and
/// at every breakpoint. Throws GeometryError when the cavity collapses.
TrajectoryPair make_pair(MirrorPath left, MirrorPath right);

/// Reference motion L0 + (Lf - L0) d(t/tau), R0 (1 - eps d(t/tau)) with d the
/// seventh-degree smoothstep, active on [0, tau].
///   contraction: final length not above the initial one; Lf required.
///   expansion:   eps <= 0 and Lf = eps R0 (derived when omitted).
///   rigid:       eps <= 0 and Lf = -eps R0 (derived when omitted).
///   custom:      no family constraint; Lf required.
TrajectoryPair make_reference(Family family, double L0, std::optional<double> Lf, double R0,
                              double eps, double tau);

/// Endpoint geometry of a reference motion, as read from a scenario.
struct Geometry {
  Family family = Family::contraction;
  double L0 = 0;
  std::optional<double> Lf;
  double R0 = 1;
  double eps = 0;
};

inline TrajectoryPair make_reference(const Geometry& g, double tau) {
  return make_reference(g.family, g.L0, g.Lf, g.R0, g.eps, tau);
}

/// Uniform sampling window for kinematic diagnostics.
struct SampleGrid {
  double t0;
  double t1;
  int n = 2001;
};

/// Largest |dX/dt| over the grid, refined inside the best bracket by locating
/// the zero of the second derivative.
double max_speed(const MirrorPath& path, const SampleGrid& grid);
/// Same, over every segment of the path (zero for a static path).
double max_speed(const MirrorPath& path);

}  // namespace dce
