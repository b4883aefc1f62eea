#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dce/errors.hpp"
#include "dce/sta.hpp"

using namespace dce;

namespace {

const Geometry kContraction{Family::contraction, 0.0, 0.3, 1.0, 0.3};

TrajectoryPair contraction(double tau = 1.2) { return make_reference(kContraction, tau); }

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) out.push_back(a + (b - a) * i / n);
  return out;
}

}  // namespace

TEST(EffectivePosition, StaticReference) {
  const TrajectoryPair p = make_pair(MirrorPath(0.2), MirrorPath(1.4));
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  for (double t : {-2.0, 0.0, 3.0}) {
    EXPECT_NEAR(effective_position(am, Mirror::right, t), 1.4, 1e-12);
    EXPECT_NEAR(effective_position(am, Mirror::left, t), 0.2, 1e-12);
  }
}

TEST(EffectivePosition, ContractionEndpoints) {
  const TrajectoryPair p = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  EXPECT_NEAR(effective_position(am, Mirror::right, -5.0), p.R0, 1e-12);
  EXPECT_NEAR(effective_position(am, Mirror::left, -5.0), p.L0, 1e-12);
  EXPECT_NEAR(effective_position(am, Mirror::right, p.tau + p.Rf + 3.0), p.Rf, 1e-12);
  EXPECT_NEAR(effective_position(am, Mirror::left, p.tau + p.Rf + 3.0), p.Lf, 1e-12);
}

TEST(EffectivePosition, RightMirrorStartsEarly) {
  const TrajectoryPair p = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  // Nothing can change before t + R0 reaches the start of the motion.
  EXPECT_NEAR(effective_position(am, Mirror::right, -p.R0 - 1e-3), p.R0, 1e-12);
  // Well before the reference starts moving the effective mirror already has.
  EXPECT_GT(std::abs(effective_position(am, Mirror::right, -0.5 * p.R0) - p.R0), 1e-3);
}

TEST(EffectivePosition, DefaultBracket) {
  const TrajectoryPair p = contraction();
  const Bracket b = default_bracket(p);
  EXPECT_DOUBLE_EQ(b.lo, -1.0);
  EXPECT_DOUBLE_EQ(b.hi, 2.0);
}

TEST(EffectivePosition, BracketExpandsWhenRootOutside) {
  const TrajectoryPair p = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  const double x = effective_position(am, Mirror::right, 0.4, Bracket{-0.5, -0.4});
  EXPECT_NEAR(x, effective_position(am, Mirror::right, 0.4), 1e-12);
}

TEST(EffectiveTrajectory, ResidualAtEverySample) {
  const AdiabaticMoore am = AdiabaticMoore::build(contraction());
  for (Mirror side : {Mirror::left, Mirror::right}) {
    const EffectiveTrajectory eff = build_effective(am, side);
    EXPECT_EQ(eff.failures, 0);
    EXPECT_TRUE(eff.converged);
    EXPECT_LT(effective_residual(am, eff), 1e-9);
  }
}

TEST(EffectiveTrajectory, InterpolantHitsSamplesAndEndpoints) {
  const TrajectoryPair p = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  const EffectiveTrajectory eff = build_effective(am, Mirror::right);
  for (Eigen::Index i = 0; i < eff.times.size(); i += 97) {
    EXPECT_NEAR(eff.eval(eff.times[i]), eff.positions[i], 1e-14);
  }
  EXPECT_EQ(eff.eval(-50.0), p.R0);
  EXPECT_EQ(eff.eval(50.0), p.Rf);
  EXPECT_NEAR(eff.positions[0], p.R0, 1e-12);
  EXPECT_NEAR(eff.positions[eff.positions.size() - 1], p.Rf, 1e-12);
}

TEST(EffectiveTrajectory, InterpolantBetweenSamples) {
  const AdiabaticMoore am = AdiabaticMoore::build(contraction());
  const EffectiveTrajectory eff = build_effective(am, Mirror::left);
  for (double t : grid(-0.9, 1.9, 53)) {
    EXPECT_NEAR(eff.eval(t), effective_position(am, Mirror::left, t), 1e-8);
  }
}

TEST(EffectiveTrajectory, SlowerMotionIsSlower) {
  EXPECT_GE(max_effective_speed(kContraction, 0.4), max_effective_speed(kContraction, 1.2));
  EXPECT_LT(max_effective_speed(kContraction, 1.2), 1.0);
}

TEST(EffectiveTrajectory, TooFastMotionIsFlagged) {
  const AdiabaticMoore am = AdiabaticMoore::build(contraction(0.05));
  const EffectiveTrajectory left = build_effective(am, Mirror::left);
  const EffectiveTrajectory right = build_effective(am, Mirror::right);
  EXPECT_FALSE(left.realizable() && right.realizable());
  const EffectiveTrajectory& bad = left.failures ? left : right;
  if (bad.failures > 0) {
    EXPECT_TRUE(std::isinf(bad.max_speed()));
    EXPECT_FALSE(bad.first_failure.empty());
    EXPECT_THROW(bad.to_path(), NoEffectivePosition);
  }
}

TEST(EffectiveTrajectory, ExactSolverReproducesAdiabaticFunctions) {
  const TrajectoryPair p = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  const TrajectoryPair eff = effective_pair(build_effective(am, Mirror::left),
                                            build_effective(am, Mirror::right));
  const ExactMoore em(eff);
  double worst = 0;
  for (double z : grid(-2.5, 4.0, 400)) {
    worst = std::max(worst, std::abs(em.F(z).v - am.F(z).v));
    worst = std::max(worst, std::abs(em.G(z).v - am.G(z).v));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Limit, ContractionValues) {
  EXPECT_NEAR(limit_velocity(0, 0.3, 1, 0.7), -3.0 / 7.0, 1e-15);
  EXPECT_NEAR(limit_right_intercept(0, 0.3, 1, 0.7), 11.0 / 14.0, 1e-15);
  const auto [left, right] = limit_trajectory(0, 0.3, 1, 0.7);
  EXPECT_NEAR(right.eval(0.0), 11.0 / 14.0, 1e-15);
  EXPECT_NEAR(right.eval(-2.0), 1.0, 0.0);
  EXPECT_NEAR(right.eval(2.0), 0.7, 0.0);
  EXPECT_NEAR(left.eval(-2.0), 0.0, 0.0);
  EXPECT_NEAR(left.eval(2.0), 0.3, 0.0);
}

TEST(Limit, SidesShareOneSlope) {
  const auto [left, right] = limit_trajectory(0, 0.3, 1, 0.7);
  const double h = 1e-3;
  const double left_slope = (left.eval(0.1 + h) - left.eval(0.1 - h)) / (2 * h);
  const double right_slope = (right.eval(-0.5 + h) - right.eval(-0.5 - h)) / (2 * h);
  EXPECT_NEAR(left_slope, right_slope, 1e-12);
  EXPECT_NEAR(left_slope, -3.0 / 7.0, 1e-12);
}

TEST(Limit, VelocitySigns) {
  EXPECT_LT(limit_velocity(0, 0.3, 1, 0.7), 0.0);
  EXPECT_GT(limit_velocity(0, -0.3, 1, 1.3), 0.0);
  EXPECT_EQ(limit_velocity(0, 0.3, 1, 1.3), 0.0);
}

TEST(Limit, TrivialMotionIsConstantAndContinuous) {
  for (auto [L, R] : {std::pair{0.0, 1.0}, std::pair{0.25, 1.0}, std::pair{-0.4, 0.6}}) {
    const auto [left, right] = limit_trajectory(L, L, R, R);
    EXPECT_TRUE(left.continuous());
    EXPECT_TRUE(right.continuous());
    for (double t : grid(-3.0, 3.0, 61)) {
      EXPECT_NEAR(left.eval(t), L, 1e-15);
      EXPECT_NEAR(right.eval(t), R, 1e-15);
    }
  }
}

TEST(Limit, ContinuousWhenLeftWallRestsAtOrigin) {
  EXPECT_TRUE(continuity_check(0, 0, 1, 0.7));
  const auto [left, right] = limit_trajectory(0, 0, 1, 0.7);
  EXPECT_TRUE(left.continuous());
  EXPECT_TRUE(right.continuous());
}

TEST(Limit, DegenerateCavityRejected) {
  EXPECT_THROW(limit_trajectory(0, 0.3, 0, 0.7), GeometryError);
  EXPECT_THROW(limit_trajectory(0, 0.7, 1, 0.7), GeometryError);
}

TEST(Continuity, Examples) {
  EXPECT_TRUE(continuity_check(0, 0, 1, 1.3));
  EXPECT_TRUE(continuity_check(0.2, 0.2, 1, 1));
  EXPECT_FALSE(continuity_check(0, 0.3, 1, 0.7));
  EXPECT_TRUE(continuity_check(0.1, 0.2, 1, 2));
}

TEST(CriticalTau, TrivialMotionAllPhysical) {
  const Geometry still{Family::contraction, 0.0, 0.0, 1.0, 0.0};
  const CriticalTau c = critical_tau(still, 0.05, 2.0);
  EXPECT_EQ(c.outcome, CriticalTau::Outcome::all_physical);
}

TEST(CriticalTau, ContractionHasFiniteCriticalDuration) {
  const CriticalTau c = critical_tau(kContraction, 0.05, 2.0, 1e-3);
  ASSERT_EQ(c.outcome, CriticalTau::Outcome::found);
  EXPECT_GT(c.tau, 0.05);
  EXPECT_LT(c.tau, 2.0);
  EXPECT_GE(max_effective_speed(kContraction, c.tau - 2e-3), 1.0);
  EXPECT_LT(max_effective_speed(kContraction, c.tau + 2e-3), 1.0);
}
