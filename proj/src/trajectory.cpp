#include "dce/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dce/errors.hpp"
#include "dce/roots.hpp"

namespace dce {

namespace {

// Horner evaluation of p, p', p'', p''' at s.
Jet poly_jet(const Eigen::VectorXd& c, double s) {
  Jet out;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    out.d3 = out.d3 * s + 3.0 * out.d2;
    out.d2 = out.d2 * s + 2.0 * out.d1;
    out.d1 = out.d1 * s + out.v;
    out.v = out.v * s + c[k];
  }
  return out;
}

const Eigen::VectorXd& smoothstep_shape() {
  static const Eigen::VectorXd shape = [] {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(8);
    c << 0, 0, 0, 0, 35, -84, 70, -20;
    return c;
  }();
  return shape;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double smoothstep7(double x, int order) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return order == 0 ? 1.0 : 0.0;
  return poly_jet(smoothstep_shape(), x)[order];
}

Jet Segment::jet(double t) const {
  const double h = end - start;
  const double s = (t - start) / h;
  const Jet p = poly_jet(shape, s);
  const double amp = to - from;
  return {from * (1.0 - p.v) + to * p.v, amp * p.d1 / h, amp * p.d2 / (h * h),
          amp * p.d3 / (h * h * h)};
}

MirrorPath::MirrorPath(double position)
    : initial_(position), final_(position), min_(position), max_(position) {}

MirrorPath MirrorPath::from_segments(std::vector<Segment> segments, int continuity_order,
                                     double tol) {
  if (segments.empty()) throw GeometryError("mirror path needs at least one segment");
  MirrorPath path;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!(s.end > s.start)) throw GeometryError("segment with non-positive duration");
    if (s.shape.size() == 0) throw GeometryError("segment without polynomial coefficients");
    if (i > 0 && s.start != segments[i - 1].end) {
      throw GeometryError("segments must be contiguous");
    }
  }
  auto check = [&](const Jet& a, const Jet& b, double where) {
    for (int k = 0; k <= continuity_order; ++k) {
      if (!close(a[k], b[k], tol)) {
        throw GeometryError("mirror path derivative of order " + std::to_string(k) +
                            " jumps at t = " + std::to_string(where));
      }
    }
  };
  const Jet first = segments.front().jet(segments.front().start);
  const Jet last = segments.back().jet(segments.back().end);
  check(Jet::constant(first.v), first, segments.front().start);
  check(last, Jet::constant(last.v), segments.back().end);
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const double t = segments[i].start;
    check(segments[i - 1].jet(t), segments[i].jet(t), t);
  }

  path.initial_ = first.v;
  path.final_ = last.v;
  path.min_ = std::min(first.v, last.v);
  path.max_ = std::max(first.v, last.v);
  for (const Segment& s : segments) {
    path.breaks_.push_back(s.start);
    constexpr int kProbe = 64;
    for (int j = 0; j <= kProbe; ++j) {
      const double t = s.start + (s.end - s.start) * j / kProbe;
      const double x = s.jet(t).v;
      path.min_ = std::min(path.min_, x);
      path.max_ = std::max(path.max_, x);
    }
  }
  path.breaks_.push_back(segments.back().end);
  path.segments_ = std::move(segments);
  return path;
}

Jet MirrorPath::jet(double t) const {
  if (segments_.empty() || t <= breaks_.front()) return Jet::constant(initial_);
  if (t >= breaks_.back()) return Jet::constant(final_);
  // breaks_[i] is the start of segment i.
  const auto it = std::upper_bound(breaks_.begin(), breaks_.end() - 1, t);
  const auto idx = static_cast<std::size_t>(std::distance(breaks_.begin(), it)) - 1;
  return segments_[idx].jet(t);
}

double MirrorPath::eval(double t, int order) const { return jet(t)[order]; }

Family parse_family(std::string_view name) {
  if (name == "contraction") return Family::contraction;
  if (name == "expansion") return Family::expansion;
  if (name == "rigid") return Family::rigid;
  if (name == "custom") return Family::custom;
  throw ConfigError("unknown motion family '" + std::string(name) + "'");
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::contraction: return "contraction";
    case Family::expansion: return "expansion";
    case Family::rigid: return "rigid";
    case Family::custom: return "custom";
  }
  return "custom";
}

double TrajectoryPair::motion_start() const {
  if (left.is_static() && right.is_static()) return 0.0;
  if (left.is_static()) return right.motion_start();
  if (right.is_static()) return left.motion_start();
  return std::min(left.motion_start(), right.motion_start());
}

double TrajectoryPair::motion_end() const {
  if (left.is_static() && right.is_static()) return 0.0;
  if (left.is_static()) return right.motion_end();
  if (right.is_static()) return left.motion_end();
  return std::max(left.motion_end(), right.motion_end());
}

TrajectoryPair make_pair(MirrorPath left, MirrorPath right) {
  TrajectoryPair pair;
  pair.L0 = left.initial();
  pair.Lf = left.final();
  pair.R0 = right.initial();
  pair.Rf = right.final();
  pair.left = std::move(left);
  pair.right = std::move(right);
  pair.tau = pair.motion_end() - pair.motion_start();

  auto require_gap = [&](double t) {
    if (!(pair.length(t) > 0.0)) {
      throw GeometryError("mirrors cross or touch at t = " + std::to_string(t));
    }
  };
  if (!(pair.d0() > 0.0) || !(pair.df() > 0.0)) {
    throw GeometryError("cavity length must stay positive");
  }
  for (const auto* path : {&pair.left, &pair.right}) {
    for (double t : path->breakpoints()) require_gap(t);
  }
  if (pair.tau > 0.0) {
    constexpr int kSamples = 4096;
    const double t0 = pair.motion_start();
    for (int i = 0; i <= kSamples; ++i) require_gap(t0 + pair.tau * i / kSamples);
  }
  return pair;
}

TrajectoryPair make_reference(Family family, double L0, std::optional<double> Lf, double R0,
                              double eps, double tau) {
  if (!(tau > 0.0)) throw GeometryError("motion duration tau must be positive");
  double left_final = 0;
  switch (family) {
    case Family::expansion:
    case Family::rigid: {
      if (!(eps <= 0.0)) {
        throw GeometryError(std::string(to_string(family)) + " motion requires eps < 0");
      }
      const double forced = family == Family::expansion ? eps * R0 : -eps * R0;
      if (Lf && !close(*Lf, forced, 1e-12)) {
        throw GeometryError(std::string(to_string(family)) + " motion requires Lf = " +
                            std::to_string(forced));
      }
      left_final = forced;
      break;
    }
    case Family::contraction:
    case Family::custom:
      if (!Lf) throw GeometryError("final left position Lf is required");
      left_final = *Lf;
      break;
  }
  const double right_final = R0 * (1.0 - eps);
  if (family == Family::contraction && !(right_final - left_final <= R0 - L0)) {
    throw GeometryError("contraction must end shorter than it starts");
  }
  if (!(R0 - L0 > 0.0) || !(right_final - left_final > 0.0)) {
    throw GeometryError("mirrors would cross: need R > L at both ends of the motion");
  }

  auto blend = [&](double from, double to) {
    if (from == to) return MirrorPath(from);
    Segment s;
    s.start = 0.0;
    s.end = tau;
    s.from = from;
    s.to = to;
    s.shape = smoothstep_shape();
    return MirrorPath::from_segments({s});
  };
  // R0 (1 - eps d) = R0 (1 - d) + R0 (1 - eps) d, the same blend form.
  TrajectoryPair pair = make_pair(blend(L0, left_final), blend(R0, right_final));
  pair.tau = tau;
  return pair;
}

double max_speed(const MirrorPath& path, const SampleGrid& grid) {
  if (path.is_static() || grid.n < 2) return 0.0;
  const int n = grid.n;
  const double dt = (grid.t1 - grid.t0) / (n - 1);
  int best = 0;
  double best_speed = -1.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::abs(path.eval(grid.t0 + dt * i, 1));
    if (v > best_speed) {
      best_speed = v;
      best = i;
    }
  }
  // The maximum of |X'| sits at a zero of X''; look for one on either side.
  auto accel = [&](double t) { return path.eval(t, 2); };
  const double tb = grid.t0 + dt * best;
  for (double ta : {tb - dt, tb + dt}) {
    const double lo = std::min(ta, tb), hi = std::max(ta, tb);
    const double a_lo = accel(lo), a_hi = accel(hi);
    if (a_lo == 0.0 || a_hi == 0.0 || (a_lo < 0) != (a_hi < 0)) {
      const auto root = roots::bisect_secant(accel, lo, hi, a_lo, a_hi, {1e-14, 200});
      best_speed = std::max(best_speed, std::abs(path.eval(root.x, 1)));
    }
  }
  return best_speed;
}

double max_speed(const MirrorPath& path) {
  double v = 0.0;
  for (const Segment& s : path.segments()) {
    v = std::max(v, max_speed(path, {s.start, s.end, 257}));
  }
  return v;
}

}  // namespace dce
