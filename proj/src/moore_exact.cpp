#include "dce/moore_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dce/errors.hpp"
#include "dce/roots.hpp"

namespace dce {

namespace {

const MirrorPath& path_of(const TrajectoryPair& pair, Mirror m) {
  return m == Mirror::left ? pair.left : pair.right;
}

// Root of t + sign * X(t) = target. The map is strictly increasing for a
// subluminal path, so outside the motion window the answer is explicit.
double invert(const MirrorPath& path, double sign, double target, double tol) {
  if (path.is_static()) return target - sign * path.initial();
  const double start = path.motion_start();
  const double end = path.motion_end();
  if (start + sign * path.initial() >= target) return target - sign * path.initial();
  if (end + sign * path.final() <= target) return target - sign * path.final();

  auto g = [&](double t) { return t + sign * path.eval(t) - target; };
  // t = target - sign X(t) lies between the extreme positions.
  const double x_lo = sign > 0 ? path.min_position() : -path.max_position();
  const double x_hi = sign > 0 ? path.max_position() : -path.min_position();
  double lo = std::max(start, target - x_hi);
  double hi = std::min(end, target - x_lo);
  double g_lo = g(lo), g_hi = g(hi);
  if (g_lo > 0.0) {
    lo = start;
    g_lo = g(lo);
  }
  if (g_hi < 0.0) {
    hi = end;
    g_hi = g(hi);
  }
  return roots::bisect_secant(g, lo, hi, g_lo, g_hi, {tol, 400}).x;
}

// Jet of the reflection map: argument -> bounce time -> outgoing argument.
// For `in_sign` = +1 the incoming argument is t + X(t), for -1 it is t - X(t);
// the outgoing argument uses the opposite sign.
Jet reflection_jet(const MirrorPath& path, double in_sign, double t) {
  const Jet X = path.jet(t);
  const Jet incoming = Jet::variable(t) + in_sign * X;
  const Jet outgoing = Jet::variable(t) - in_sign * X;
  return compose(outgoing, inverse(incoming, t));
}

}  // namespace

double invert_advanced(const TrajectoryPair& pair, Mirror mirror, double z, double tol) {
  return invert(path_of(pair, mirror), +1.0, z, tol);
}

double invert_retarded(const TrajectoryPair& pair, Mirror mirror, double w, double tol) {
  return invert(path_of(pair, mirror), -1.0, w, tol);
}

ExactMoore::ExactMoore(TrajectoryPair pair, ExactOptions opt)
    : pair_(std::move(pair)), opt_(opt) {
  for (const auto* path : {&pair_.left, &pair_.right}) {
    const double v = max_speed(*path);
    if (v >= 1.0) {
      throw SuperluminalError("mirror speed " + std::to_string(v) +
                              " reaches the speed of light; Moore functions are undefined");
    }
  }
  min_length_ = std::min(pair_.d0(), pair_.df());
  const double t0 = pair_.motion_start();
  const double span = pair_.motion_end() - t0;
  if (span > 0.0) {
    constexpr int kSamples = 8192;
    for (int i = 0; i <= kSamples; ++i) {
      min_length_ = std::min(min_length_, pair_.length(t0 + span * i / kSamples));
    }
  }
  max_extent_ = std::max({std::abs(pair_.left.min_position()), std::abs(pair_.left.max_position()),
                          std::abs(pair_.right.min_position()),
                          std::abs(pair_.right.max_position())});
}

Jet ExactMoore::F(double w) const { return solve(Branch::F, w, nullptr); }
Jet ExactMoore::G(double z) const { return solve(Branch::G, z, nullptr); }

ExactMoore::Trace ExactMoore::trace(Branch which, double arg) const {
  Trace tr;
  tr.value = solve(which, arg, &tr);
  return tr;
}

Jet ExactMoore::solve(Branch which, double arg, Trace* tr) const {
  const double start = pair_.motion_start();
  const double d0 = pair_.d0();
  const double L0 = pair_.L0;
  // Each round trip moves the argument back by at least 2 * min length.
  const double reach = std::max(0.0, arg - start) + 2.0 * max_extent_;
  const int max_steps = 2 * (static_cast<int>(std::ceil(reach / (2.0 * min_length_))) + 2) + 2;

  Jet map = Jet::variable(arg);  // current argument as a function of `arg`
  Branch branch = which;
  double offset = 0.0;
  double last_g = std::numeric_limits<double>::infinity();
  double last_f = last_g;
  (which == Branch::G ? last_g : last_f) = arg;
  int round_trips = 0;
  if (tr) tr->arguments.push_back(arg);

  for (int step = 0; step <= max_steps; ++step) {
    const bool on_g = branch == Branch::G;
    // G lines end on the right mirror, F lines on the left one.
    const MirrorPath& mirror = on_g ? pair_.right : pair_.left;
    const double in_sign = on_g ? +1.0 : -1.0;
    const double t = invert(mirror, in_sign, map.v, opt_.tolerance);
    if (t <= start) {
      if (tr) {
        tr->round_trips = round_trips;
        tr->terminal = branch;
      }
      const double shift = on_g ? -L0 : L0;
      return Jet{(map.v + shift) / d0 + offset, map.d1 / d0, map.d2 / d0, map.d3 / d0};
    }
    map = compose(reflection_jet(mirror, in_sign, t), map);
    if (on_g) {
      offset += 2.0;
      ++round_trips;
    }
    branch = on_g ? Branch::F : Branch::G;
    // Backward trace must strictly decrease along each branch.
    double& last = branch == Branch::G ? last_g : last_f;
    if (!(map.v < last)) {
      throw GeometryError("backward characteristic trace is not decreasing; mirrors overlap?");
    }
    last = map.v;
    if (tr) tr->arguments.push_back(map.v);
  }
  throw ConvergenceError("backward characteristic trace exceeded its bounce bound");
}

std::vector<double> ExactMoore::kinks(Branch which, double lo, double hi) const {
  // Light rays leave every breakpoint event of either mirror and bounce
  // forward; F kinks sit on right-moving rays (t - x fixed), G kinks on
  // left-moving ones (t + x fixed).
  std::vector<double> out;
  auto follow = [&](Branch branch, double arg) {
    // Reflection lowers an argument by at most 2 max|X|, so a ray whose
    // argument is beyond hi + 2 max|X| cannot come back into range.
    const double stop = hi + 2.0 * max_extent_;
    for (int guard = 0; guard < 100000 && arg <= stop; ++guard) {
      if (branch == which && arg >= lo && arg <= hi) out.push_back(arg);
      if (branch == Branch::F) {
        // Right-moving ray hits the right mirror at t - R(t) = arg.
        const double t = invert(pair_.right, -1.0, arg, opt_.tolerance);
        arg = t + pair_.right.eval(t);
        branch = Branch::G;
      } else {
        const double t = invert(pair_.left, +1.0, arg, opt_.tolerance);
        arg = t - pair_.left.eval(t);
        branch = Branch::F;
      }
    }
  };
  for (double t : pair_.left.breakpoints()) follow(Branch::F, t - pair_.left.eval(t));
  for (double t : pair_.right.breakpoints()) follow(Branch::G, t + pair_.right.eval(t));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Residuals residuals(const MooreFunctions& moore, const TrajectoryPair& pair,
                    std::span<const double> times) {
  Residuals r;
  for (double t : times) {
    const double L = pair.left.eval(t);
    const double R = pair.right.eval(t);
    r.left = std::max(r.left, std::abs(moore.G(t + L).v - moore.F(t - L).v));
    r.right = std::max(r.right, std::abs(moore.G(t + R).v - moore.F(t - R).v - 2.0));
  }
  return r;
}

Residuals residuals(const ExactMoore& em, std::span<const double> times) {
  return residuals(em, em.pair(), times);
}

}  // namespace dce
