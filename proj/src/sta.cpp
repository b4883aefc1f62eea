#include "dce/sta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dce/errors.hpp"
#include "dce/roots.hpp"

namespace dce {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double side_constant(Mirror side) { return side == Mirror::left ? 0.0 : 2.0; }

double hermite(double t0, double t1, double x0, double x1, double v0, double v1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * v0 + (-2 * s3 + 3 * s2) * x1 +
         (s3 - s2) * h * v1;
}

struct Sample {
  double x;
  double v;
};

Sample solve_sample(const AdiabaticMoore& am, Mirror side, double t, const Bracket& bracket,
                    EffectiveTrajectory& eff) {
  try {
    const double x = effective_position(am, side, t, bracket);
    return {x, effective_velocity(am, t, x)};
  } catch (const NoEffectivePosition& e) {
    if (eff.failures++ == 0) eff.first_failure = e.what();
  } catch (const AdiabaticOrderViolation& e) {
    if (eff.failures++ == 0) eff.first_failure = e.what();
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

}  // namespace

Bracket default_bracket(const TrajectoryPair& ref) {
  return {std::min(ref.L0, ref.Lf) - ref.d0(), std::max(ref.R0, ref.Rf) + ref.d0()};
}

double effective_position(const AdiabaticMoore& am, Mirror side, double t,
                          std::optional<Bracket> bracket) {
  const double c = side_constant(side);
  auto h = [&](double x) { return am.G(t + x).v - am.F(t - x).v - c; };
  Bracket b = bracket.value_or(default_bracket(am.pair()));
  const double max_width = 64.0 * (b.hi - b.lo);
  const auto ends = roots::expand_bracket(h, b.lo, b.hi, max_width);
  if (!ends) {
    throw NoEffectivePosition("no physical effective position at t = " + std::to_string(t));
  }
  const double x = roots::bisect_secant(h, b.lo, b.hi, ends->first, ends->second, {1e-13, 400}).x;
  const double slope = am.G(t + x).d1 + am.F(t - x).d1;
  if (!(slope > 0.0)) {
    throw AdiabaticOrderViolation("effective-position equation not increasing at t = " +
                                  std::to_string(t) + "; reference motion too fast");
  }
  return x;
}

double effective_velocity(const AdiabaticMoore& am, double t, double x) {
  const double gp = am.G(t + x).d1;
  const double fp = am.F(t - x).d1;
  return -(gp - fp) / (gp + fp);
}

double EffectiveTrajectory::eval(double t) const {
  const Eigen::Index n = times.size();
  if (n == 0) return initial;
  if (t <= times[0]) return initial;
  if (t >= times[n - 1]) return final;
  const double step = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  auto i = static_cast<Eigen::Index>((t - times[0]) / step);
  i = std::clamp<Eigen::Index>(i, 0, n - 2);
  return hermite(times[i], times[i + 1], positions[i], positions[i + 1], velocities[i],
                 velocities[i + 1], t);
}

double EffectiveTrajectory::max_speed() const {
  double v = 0.0;
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (std::isnan(positions[i])) return kInf;
    v = std::max(v, std::abs(velocities[i]));
    if (i + 1 < times.size() && !std::isnan(positions[i + 1])) {
      v = std::max(v, std::abs((positions[i + 1] - positions[i]) / (times[i + 1] - times[i])));
    }
  }
  return v;
}

MirrorPath EffectiveTrajectory::to_path() const {
  if (failures > 0) {
    throw NoEffectivePosition("effective trajectory has undefined samples: " + first_failure);
  }
  std::vector<Segment> segs;
  segs.reserve(static_cast<std::size_t>(times.size()));
  for (Eigen::Index i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    const double x0 = positions[i], x1 = positions[i + 1];
    const double m0 = h * velocities[i], m1 = h * velocities[i + 1];
    Segment s;
    s.start = times[i];
    s.end = times[i + 1];
    s.shape.resize(4);
    s.shape << x0, m0, -3 * x0 + 3 * x1 - 2 * m0 - m1, 2 * x0 - 2 * x1 + m0 + m1;
    segs.push_back(std::move(s));
  }
  return MirrorPath::from_segments(std::move(segs), 1, 1e-9);
}

EffectiveTrajectory build_effective(const AdiabaticMoore& am, Mirror side,
                                    const EffectiveOptions& opt) {
  const TrajectoryPair& ref = am.pair();
  EffectiveTrajectory eff;
  eff.side = side;
  eff.initial = side == Mirror::left ? ref.L0 : ref.R0;
  eff.final = side == Mirror::left ? ref.Lf : ref.Rf;
  const double tau = std::max(ref.tau, ref.motion_end() - ref.motion_start());
  if (!(tau > 0.0) || (ref.left.is_static() && ref.right.is_static())) {
    eff.converged = true;
    return eff;
  }
  double step = opt.step > 0.0 ? opt.step : tau / 512.0;
  // Outside this window both arguments t +/- x sit on one side of the motion.
  const double lead = std::max(std::abs(ref.L0), std::abs(ref.R0));
  const double trail = std::max(std::abs(ref.Lf), std::abs(ref.Rf));
  const double t_begin = ref.motion_start() - lead - 2.0 * step;
  double t_end = ref.motion_end() + trail + 2.0 * step;
  auto n = static_cast<Eigen::Index>(std::ceil((t_end - t_begin) / step));
  t_end = t_begin + step * static_cast<double>(n);

  const Bracket bracket = default_bracket(ref);
  eff.times = Eigen::VectorXd::LinSpaced(n + 1, t_begin, t_end);
  eff.positions.resize(n + 1);
  eff.velocities.resize(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    const Sample s = solve_sample(am, side, eff.times[i], bracket, eff);
    eff.positions[i] = s.x;
    eff.velocities[i] = s.v;
  }

  for (int level = 0; level < opt.max_refinements; ++level) {
    const Eigen::Index m = eff.times.size() - 1;
    Eigen::VectorXd t2(2 * m + 1), x2(2 * m + 1), v2(2 * m + 1);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double tm = 0.5 * (eff.times[i] + eff.times[i + 1]);
      const Sample s = solve_sample(am, side, tm, bracket, eff);
      const double guess = hermite(eff.times[i], eff.times[i + 1], eff.positions[i],
                                   eff.positions[i + 1], eff.velocities[i],
                                   eff.velocities[i + 1], tm);
      if (!std::isnan(s.x) && !std::isnan(guess)) worst = std::max(worst, std::abs(guess - s.x));
      t2[2 * i] = eff.times[i];
      x2[2 * i] = eff.positions[i];
      v2[2 * i] = eff.velocities[i];
      t2[2 * i + 1] = tm;
      x2[2 * i + 1] = s.x;
      v2[2 * i + 1] = s.v;
    }
    t2[2 * m] = eff.times[m];
    x2[2 * m] = eff.positions[m];
    v2[2 * m] = eff.velocities[m];
    eff.times = std::move(t2);
    eff.positions = std::move(x2);
    eff.velocities = std::move(v2);
    if (eff.failures > 0) break;
    if (worst < opt.refine_tol) {
      eff.converged = true;
      break;
    }
  }
  return eff;
}

TrajectoryPair effective_pair(const EffectiveTrajectory& left, const EffectiveTrajectory& right) {
  auto path = [](const EffectiveTrajectory& e) {
    return e.times.size() < 2 ? MirrorPath(e.initial) : e.to_path();
  };
  return make_pair(path(left), path(right));
}

double effective_residual(const AdiabaticMoore& am, const EffectiveTrajectory& eff) {
  const double c = side_constant(eff.side);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < eff.times.size(); ++i) {
    const double t = eff.times[i], x = eff.positions[i];
    if (std::isnan(x)) continue;
    worst = std::max(worst, std::abs(am.G(t + x).v - am.F(t - x).v - c));
  }
  return worst;
}

double limit_velocity(double L0, double Lf, double R0, double Rf) {
  const double d0 = R0 - L0, df = Rf - Lf;
  return -(d0 - df) / (d0 + df);
}

double limit_right_intercept(double L0, double Lf, double R0, double Rf) {
  const double d0 = R0 - L0, df = Rf - Lf;
  return (2.0 * d0 * df + Lf * d0 + L0 * df) / (d0 + df);
}

double limit_left_intercept(double L0, double Lf, double R0, double Rf) {
  const double d0 = R0 - L0, df = Rf - Lf;
  return (Lf * d0 + L0 * df) / (d0 + df);
}

double LimitTrajectory::eval(double t) const {
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
    if (t >= it->t_begin) return it->intercept + it->slope * t;
  }
  return pieces.front().intercept + pieces.front().slope * t;
}

std::vector<double> LimitTrajectory::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces.size(); ++i) out.push_back(pieces[i].t_begin);
  return out;
}

bool LimitTrajectory::continuous(double tol) const {
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const double t = pieces[i].t_begin;
    const double before = pieces[i - 1].intercept + pieces[i - 1].slope * t;
    const double after = pieces[i].intercept + pieces[i].slope * t;
    if (std::abs(before - after) > tol * std::max(1.0, std::abs(before))) return false;
  }
  return true;
}

namespace {

LimitTrajectory build_limit(Mirror side, double x0, double xf, double velocity,
                            double intercept) {
  LimitTrajectory lim;
  lim.side = side;
  lim.velocity = velocity;
  lim.intercept = intercept;
  const double t_a = -std::abs(x0);
  const double t_b = std::abs(xf);

  // The uniform piece solves the equation while |x| >= |t| on its own side
  // of the origin: x > 0 uses slope v, x < 0 the mirrored slope -v.
  const bool upper = intercept >= 0.0;
  const double slope = upper ? velocity : -velocity;
  const double sign = upper ? 1.0 : -1.0;
  auto valid = [&](double t) { return sign * (intercept + slope * t) >= std::abs(t); };

  std::vector<double> cuts{t_a, t_b};
  for (double c : {0.0, intercept / (sign - slope), -intercept / (sign + slope)}) {
    if (c > t_a && c < t_b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<AffinePiece> pieces{{-kInf, t_a, x0, 0.0}};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double mid = 0.5 * (a + b);
    AffinePiece p{a, b, intercept, slope};
    if (!valid(mid)) {
      // Light cone x = sign |t|.
      p.intercept = 0.0;
      p.slope = sign * (mid > 0.0 ? 1.0 : -1.0);
    }
    pieces.push_back(p);
  }
  pieces.push_back({t_b, kInf, xf, 0.0});

  for (const AffinePiece& p : pieces) {
    if (!lim.pieces.empty() && lim.pieces.back().intercept == p.intercept &&
        lim.pieces.back().slope == p.slope) {
      lim.pieces.back().t_end = p.t_end;
    } else if (p.t_end > p.t_begin) {
      lim.pieces.push_back(p);
    }
  }
  return lim;
}

}  // namespace

std::pair<LimitTrajectory, LimitTrajectory> limit_trajectory(double L0, double Lf, double R0,
                                                             double Rf) {
  if (!(R0 - L0 > 0.0) || !(Rf - Lf > 0.0)) {
    throw GeometryError("limit trajectories need positive initial and final lengths");
  }
  const double v = limit_velocity(L0, Lf, R0, Rf);
  return {build_limit(Mirror::left, L0, Lf, v, limit_left_intercept(L0, Lf, R0, Rf)),
          build_limit(Mirror::right, R0, Rf, v, limit_right_intercept(L0, Lf, R0, Rf))};
}

bool continuity_check(double L0, double Lf, double R0, double Rf) {
  const double a = Lf * R0, b = L0 * Rf;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

double limit_distance(const EffectiveTrajectory& eff, const LimitTrajectory& lim,
                      double exclusion) {
  const std::vector<double> bps = lim.breakpoints();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < eff.times.size(); ++i) {
    const double t = eff.times[i];
    const bool near = std::any_of(bps.begin(), bps.end(),
                                  [&](double b) { return std::abs(t - b) <= exclusion; });
    if (near) continue;
    if (std::isnan(eff.positions[i])) return kInf;
    worst = std::max(worst, std::abs(eff.positions[i] - lim.eval(t)));
  }
  return worst;
}

double max_effective_speed(const Geometry& geometry, double tau, const EffectiveOptions& opt) {
  const TrajectoryPair ref = make_reference(geometry, tau);
  const AdiabaticMoore am = AdiabaticMoore::build(ref);
  double v = 0.0;
  for (Mirror side : {Mirror::left, Mirror::right}) {
    v = std::max(v, build_effective(am, side, opt).max_speed());
    if (std::isinf(v)) break;
  }
  return v;
}

CriticalTau critical_tau(const Geometry& geometry, double tau_lo, double tau_hi, double tol,
                         const EffectiveOptions& opt) {
  CriticalTau out;
  auto excess = [&](double tau) {
    ++out.evaluations;
    return max_effective_speed(geometry, tau, opt) - 1.0;
  };
  double lo = tau_lo, hi = tau_hi;
  const double f_lo = excess(lo), f_hi = excess(hi);
  if (f_lo < 0.0 && f_hi < 0.0) {
    out.outcome = CriticalTau::Outcome::all_physical;
    return out;
  }
  if (f_lo >= 0.0 && f_hi >= 0.0) {
    out.outcome = CriticalTau::Outcome::none_physical;
    return out;
  }
  // Short durations are the superluminal side.
  if (f_lo < 0.0) std::swap(lo, hi);
  while (std::abs(hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) >= 0.0 ? lo : hi) = mid;
  }
  out.tau = 0.5 * (lo + hi);
  return out;
}

}  // namespace dce
