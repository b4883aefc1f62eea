#include <gtest/gtest.h>

#include <cmath>

#include "dce/errors.hpp"
#include "dce/trajectory.hpp"

using namespace dce;

namespace {

// Plain-power evaluation, independent of the Horner code under test.
double smoothstep_direct(double x) {
  return 35 * std::pow(x, 4) - 84 * std::pow(x, 5) + 70 * std::pow(x, 6) - 20 * std::pow(x, 7);
}

double smoothstep_derivative_direct(double x, int order) {
  const double c[8] = {0, 0, 0, 0, 35, -84, 70, -20};
  double sum = 0;
  for (int k = order; k < 8; ++k) {
    double falling = 1;
    for (int j = 0; j < order; ++j) falling *= k - j;
    sum += c[k] * falling * std::pow(x, k - order);
  }
  return sum;
}

TrajectoryPair contraction(double tau = 1.2) {
  return make_reference(Family::contraction, 0.0, 0.3, 1.0, 0.3, tau);
}

}  // namespace

TEST(Smoothstep, EndpointValues) {
  EXPECT_EQ(smoothstep7(0.0), 0.0);
  EXPECT_EQ(smoothstep7(1.0), 1.0);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(smoothstep7(0.0, k), 0.0);
    EXPECT_EQ(smoothstep7(1.0, k), 0.0);
  }
}

TEST(Smoothstep, Midpoint) {
  EXPECT_NEAR(smoothstep7(0.5), 35.0 / 16 - 84.0 / 32 + 70.0 / 64 - 20.0 / 128, 1e-15);
}

TEST(Smoothstep, InteriorMatchesDirectPowers) {
  for (double x = 0.0; x <= 1.0; x += 1.0 / 37) {
    EXPECT_NEAR(smoothstep7(x), smoothstep_direct(x), 1e-13);
    for (int k = 1; k <= 3; ++k) {
      EXPECT_NEAR(smoothstep7(x, k), smoothstep_derivative_direct(x, k), 1e-12 * std::max(1.0, std::abs(smoothstep7(x, k))));
    }
  }
}

TEST(Smoothstep, ClampedOutsideUnitInterval) {
  EXPECT_EQ(smoothstep7(-0.3), 0.0);
  EXPECT_EQ(smoothstep7(1.7), 1.0);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(smoothstep7(-0.3, k), 0.0);
    EXPECT_EQ(smoothstep7(1.7, k), 0.0);
  }
}

TEST(Smoothstep, MonotoneOnDenseGrid) {
  for (int i = 0; i <= 10000; ++i) EXPECT_GE(smoothstep7(i / 10000.0, 1), 0.0);
}

TEST(Reference, ContractionFinalPositions) {
  const TrajectoryPair p = contraction();
  EXPECT_DOUBLE_EQ(p.Rf, 0.7);
  EXPECT_DOUBLE_EQ(p.Lf, 0.3);
  EXPECT_DOUBLE_EQ(p.tau, 1.2);
}

TEST(Reference, ExpansionDerivesLeftFinal) {
  const TrajectoryPair p = make_reference(Family::expansion, 0.0, std::nullopt, 1.0, -0.3, 1.2);
  EXPECT_DOUBLE_EQ(p.Lf, -0.3);
  EXPECT_DOUBLE_EQ(p.Rf, 1.3);
}

TEST(Reference, RigidDerivesLeftFinal) {
  const TrajectoryPair p = make_reference(Family::rigid, 0.0, std::nullopt, 1.0, -0.3, 1.2);
  EXPECT_DOUBLE_EQ(p.Lf, 0.3);
  EXPECT_DOUBLE_EQ(p.Rf, 1.3);
  EXPECT_NEAR(p.d0(), p.df(), 1e-15);
}

TEST(Reference, NoMotionGivesConstantPaths) {
  for (Family f : {Family::contraction, Family::expansion, Family::rigid, Family::custom}) {
    const TrajectoryPair p = make_reference(f, 0.0, 0.0, 1.0, 0.0, 1.0);
    EXPECT_TRUE(p.left.is_static());
    EXPECT_TRUE(p.right.is_static());
    for (double t : {-3.0, 0.2, 0.7, 9.0}) {
      EXPECT_EQ(p.left.eval(t), 0.0);
      EXPECT_EQ(p.right.eval(t), 1.0);
      EXPECT_EQ(p.right.eval(t, 1), 0.0);
    }
  }
}

TEST(Reference, FamilyRulesRejected) {
  EXPECT_THROW(make_reference(Family::expansion, 0.0, std::nullopt, 1.0, 0.3, 1.0), GeometryError);
  EXPECT_THROW(make_reference(Family::rigid, 0.0, std::nullopt, 1.0, 0.3, 1.0), GeometryError);
  EXPECT_THROW(make_reference(Family::expansion, 0.0, 0.1, 1.0, -0.3, 1.0), GeometryError);
  EXPECT_THROW(make_reference(Family::contraction, 0.0, std::nullopt, 1.0, 0.3, 1.0), GeometryError);
  EXPECT_THROW(make_reference(Family::contraction, 0.0, -0.5, 1.0, 0.0, 1.0), GeometryError);
}

TEST(Reference, CrossingOrBadDurationRejected) {
  EXPECT_THROW(make_reference(Family::custom, 0.0, 0.8, 1.0, 0.3, 1.0), GeometryError);
  EXPECT_THROW(contraction(0.0), GeometryError);
  EXPECT_THROW(contraction(-1.0), GeometryError);
}

TEST(Reference, EvalExamples) {
  const TrajectoryPair p = contraction();
  EXPECT_EQ(p.left.eval(-5.0), 0.0);
  EXPECT_NEAR(p.left.eval(0.6, 1), 0.3 * smoothstep7(0.5, 1) / 1.2, 1e-14);
  EXPECT_EQ(p.left.eval(1.2 + 5.0, 2), 0.0);
  EXPECT_EQ(p.right.eval(6.2, 2), 0.0);
}

TEST(Reference, RoundTripEndpointsExact) {
  const TrajectoryPair p = contraction();
  for (double t : {-10.0, -1.0, 0.0}) {
    EXPECT_EQ(p.left.eval(t), p.L0);
    EXPECT_EQ(p.right.eval(t), p.R0);
  }
  for (double t : {1.2, 2.0, 50.0}) {
    EXPECT_EQ(p.left.eval(t), p.Lf);
    EXPECT_EQ(p.right.eval(t), p.Rf);
  }
}

TEST(Reference, BoundaryDerivativesVanishExactly) {
  const TrajectoryPair p = contraction();
  for (const MirrorPath* path : {&p.left, &p.right}) {
    for (double t : path->breakpoints()) {
      for (int k = 1; k <= 3; ++k) EXPECT_EQ(path->eval(t, k), 0.0) << "t=" << t << " k=" << k;
    }
  }
}

TEST(Reference, DerivativesMatchFiniteDifferences) {
  const TrajectoryPair p = contraction();
  const double h = 1e-5;
  for (double t = 0.05; t < 1.2; t += 0.1) {
    for (int k = 1; k <= 3; ++k) {
      const double fd = (p.right.eval(t + h, k - 1) - p.right.eval(t - h, k - 1)) / (2 * h);
      EXPECT_NEAR(p.right.eval(t, k), fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(MaxSpeed, StaticIsZero) { EXPECT_EQ(max_speed(MirrorPath(0.4)), 0.0); }

TEST(MaxSpeed, LinearSegment) {
  // The ends are not flat, so only continuity of the value is requested.
  Segment s;
  s.start = 0;
  s.end = 2;
  s.shape.resize(2);
  s.shape << 0.1, 1.0;  // x = 0.1 + 0.5 t
  const MirrorPath path = MirrorPath::from_segments({s}, 0);
  EXPECT_NEAR(max_speed(path, {0.0, 2.0, 11}), 0.5, 1e-15);
}

TEST(MaxSpeed, ContractionMatchesDenseSampling) {
  const TrajectoryPair p = contraction();
  double dense = 0;
  for (int i = 0; i <= 200000; ++i) {
    const double x = i / 200000.0;
    dense = std::max(dense, 0.3 * std::abs(smoothstep_derivative_direct(x, 1)) / 1.2);
  }
  const double v = max_speed(p.right);
  EXPECT_LT(v, 1.0);
  EXPECT_NEAR(v, dense, 1e-9);
  // delta' peaks at x = 1/2.
  EXPECT_NEAR(v, 0.3 * smoothstep7(0.5, 1) / 1.2, 1e-12);
}

TEST(MirrorPath, RejectsDiscontinuousSegments) {
  Segment a;
  a.start = 0;
  a.end = 1;
  a.shape = Eigen::VectorXd::Zero(2);
  a.shape << 0, 1;
  Segment b = a;
  b.start = 1;
  b.end = 2;
  EXPECT_THROW(MirrorPath::from_segments({a, b}, 0), GeometryError);
  Segment gap = b;
  gap.start = 1.5;
  gap.end = 2.5;
  EXPECT_THROW(MirrorPath::from_segments({a, gap}, 0), GeometryError);
}

TEST(MirrorPath, AcceptsC3Junction) {
  // Two halves of the same smoothstep expressed on separate segments.
  const double c[8] = {0, 0, 0, 0, 35, -84, 70, -20};
  auto shifted = [&](double a, double h) {
    // Coefficients of p(a + h s) in s.
    Eigen::VectorXd out = Eigen::VectorXd::Zero(8);
    for (int k = 0; k < 8; ++k) {
      double binom = 1;
      for (int j = 0; j <= k; ++j) {
        out[j] += c[k] * binom * std::pow(a, k - j) * std::pow(h, j);
        binom = binom * (k - j) / (j + 1);
      }
    }
    return out;
  };
  Segment a, b;
  a.start = 0, a.end = 0.5, a.shape = shifted(0.0, 0.5);
  b.start = 0.5, b.end = 1.0, b.shape = shifted(0.5, 0.5);
  const MirrorPath path = MirrorPath::from_segments({a, b});
  for (double t : {0.1, 0.5, 0.77}) {
    for (int k = 0; k <= 3; ++k) EXPECT_NEAR(path.eval(t, k), smoothstep7(t, k), 1e-11);
  }
}

TEST(Family, ParseRoundTrip) {
  for (Family f : {Family::contraction, Family::expansion, Family::rigid, Family::custom}) {
    EXPECT_EQ(parse_family(to_string(f)), f);
  }
  EXPECT_THROW(parse_family("spin"), ConfigError);
}
