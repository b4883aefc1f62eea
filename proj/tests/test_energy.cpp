#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dce/energy.hpp"
#include "dce/errors.hpp"
#include "dce/moore_adiabatic.hpp"
#include "dce/moore_exact.hpp"
#include "dce/sta.hpp"

using namespace dce;

namespace {

constexpr double kPi = std::numbers::pi;

TrajectoryPair contraction(double tau = 1.2) {
  return make_reference(Family::contraction, 0.0, 0.3, 1.0, 0.3, tau);
}

TrajectoryPair static_pair(double L0 = 0.0, double R0 = 1.0) {
  return make_pair(MirrorPath(L0), MirrorPath(R0));
}

double z_oracle(double x, int terms) {
  double s = 0;
  for (int n = 1; n <= terms; ++n) s += n * kPi / (std::exp(n * kPi / x) - 1);
  return s;
}

}  // namespace

TEST(ThermalZ, ZeroTemperature) { EXPECT_EQ(thermal_Z(0.0), 0.0); }

TEST(ThermalZ, MatchesDirectSummation) {
  EXPECT_NEAR(thermal_Z(1.0), z_oracle(1.0, 20), 1e-15);
  EXPECT_GT(thermal_Z(1.0), kPi / (std::exp(kPi) - 1));
  EXPECT_NEAR(thermal_Z(5.0), z_oracle(5.0, 400), 1e-12);
}

TEST(ThermalZ, IncreasesWithTemperature) {
  EXPECT_GT(thermal_Z(5.0), thermal_Z(1.0));
  EXPECT_GT(thermal_Z(1.0), thermal_Z(0.3));
}

TEST(ThermalZ, HighTemperatureAsymptote) {
  // sum n pi / (exp(n pi/x) - 1) -> x^2 / pi * zeta(2) - x/2 + ... = pi x^2 / 6 - x/2.
  const double x = 40.0;
  EXPECT_NEAR(thermal_Z(x), kPi * x * x / 6 - x / 2 + kPi / 24, 1e-6 * x * x);
}

TEST(ThermalZ, NegativeRejected) { EXPECT_THROW(thermal_Z(-0.1), DomainError); }

TEST(ThermalState, CachesZ) {
  const ThermalState s = ThermalState::make(2.0, 0.5);
  EXPECT_DOUBLE_EQ(s.Z, thermal_Z(1.0));
  EXPECT_EQ(ThermalState::make(0.0, 1.0).Z, 0.0);
}

TEST(Density, StaticCasimir) {
  const TrajectoryPair p = static_pair(0.0, 1.3);
  const ExactMoore em(p);
  const ThermalState cold = ThermalState::make(0.0, p.d0());
  for (double x : {0.0, 0.4, 1.3}) {
    EXPECT_NEAR(density(em, p, x, 0.7, cold), -kPi / (24 * 1.3 * 1.3), 1e-15);
  }
  const ThermalState warm = ThermalState::make(2.0, p.d0());
  EXPECT_NEAR(density(em, p, 0.5, 0.7, warm), (-kPi / 24 + thermal_Z(2.6)) / (1.3 * 1.3), 1e-14);
}

TEST(Density, OutsideCavityRejected) {
  const TrajectoryPair p = static_pair(0.0, 1.0);
  const ExactMoore em(p);
  const ThermalState s = ThermalState::make(0.0, 1.0);
  EXPECT_THROW(density(em, p, -0.01, 0.0, s), DomainError);
  EXPECT_THROW(density(em, p, 1.01, 0.0, s), DomainError);
}

TEST(Density, EffectiveRunIsStaticAfterMotion) {
  const TrajectoryPair ref = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(ref);
  const TrajectoryPair eff = effective_pair(build_effective(am, Mirror::left),
                                            build_effective(am, Mirror::right));
  const double t = ref.tau + ref.Rf + 0.5;
  for (double T : {0.0, 1.0, 5.0}) {
    const ThermalState s = ThermalState::make(T, ref.d0());
    const double expected = (-kPi / 24 + s.Z) / (ref.df() * ref.df());
    for (double x : {ref.Lf, 0.5, ref.Rf}) {
      EXPECT_NEAR(density(am, eff, x, t, s), expected, 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(TotalEnergy, StaticClosedForms) {
  const TrajectoryPair p = static_pair(0.0, 1.0);
  const ExactMoore em(p);
  EXPECT_NEAR(total_energy(em, p, 0.3, ThermalState::make(0.0, 1.0)), -kPi / 24, 1e-14);
  EXPECT_NEAR(total_energy(em, p, 0.3, ThermalState::make(1.0, 1.0)), -kPi / 24 + thermal_Z(1.0), 1e-14);
}

TEST(TotalEnergy, EffectiveRunEndsAdiabatic) {
  const TrajectoryPair ref = contraction();
  const AdiabaticMoore am = AdiabaticMoore::build(ref);
  const TrajectoryPair eff = effective_pair(build_effective(am, Mirror::left),
                                            build_effective(am, Mirror::right));
  const double t = ref.tau + 3 * ref.df();
  for (double T : {0.0, 1.0, 5.0}) {
    const ThermalState s = ThermalState::make(T, ref.d0());
    const double E = total_energy(am, eff, t, s);
    const double Ead = adiabatic_energy(ref.df(), s);
    EXPECT_NEAR(E, Ead, 1e-10 * std::abs(Ead));
  }
}

TEST(TotalEnergy, HalvingSpatialStepIsStable) {
  const TrajectoryPair p = contraction();
  const ExactMoore em(p);
  const ThermalState s = ThermalState::make(0.0, p.d0());
  for (double t : {0.3, 0.9, 1.7}) {
    const double coarse = total_energy(em, p, t, s, {2001});
    const double fine = total_energy(em, p, t, s, {4001});
    EXPECT_NEAR(coarse, fine, 1e-8 * std::abs(fine)) << t;
  }
}

TEST(TotalEnergy, KinkPanelsReported) {
  const TrajectoryPair p = contraction();
  const ExactMoore em(p);
  EXPECT_TRUE(total_energy_parts(em, p, 1.5).converged);
}

TEST(TotalEnergy, ExactAndAdiabaticDensitiesAgreeForSlowMotion) {
  const TrajectoryPair p = contraction(40.0);
  const ExactMoore em(p);
  const AdiabaticMoore am = AdiabaticMoore::build(p);
  const ThermalState s = ThermalState::make(0.0, p.d0());
  double worst = 0, scale = 0;
  for (double t = 0.0; t <= 40.0; t += 2.0) {
    const double L = p.left.eval(t), R = p.right.eval(t);
    for (int i = 0; i <= 20; ++i) {
      const double x = L + (R - L) * i / 20;
      const double a = density(am, p, x, t, s);
      worst = std::max(worst, std::abs(density(em, p, x, t, s) - a));
      scale = std::max(scale, std::abs(a));
    }
  }
  EXPECT_LT(worst, 1e-3 * scale);
}

TEST(AdiabaticEnergy, Examples) {
  const ThermalState cold = ThermalState::make(0.0, 1.0);
  EXPECT_DOUBLE_EQ(adiabatic_energy(1.0, cold), -kPi / 24);
  EXPECT_DOUBLE_EQ(adiabatic_energy(0.4, cold), -kPi / (24 * 0.4));
  const ThermalState hot = ThermalState::make(5.0, 1.0);
  EXPECT_GT(hot.Z, kPi / 24);
  EXPECT_GT(adiabatic_energy(1.0, hot), 0.0);
  EXPECT_THROW(adiabatic_energy(0.0, cold), DomainError);
  EXPECT_THROW(adiabatic_energy(-1.0, cold), DomainError);
}

TEST(Adiabaticity, RatioAndZeroGuard) {
  EXPECT_DOUBLE_EQ(adiabaticity(-2.0, -4.0), 0.5);
  EXPECT_THROW(adiabaticity(1.0, 0.0), DomainError);
}

TEST(Adiabaticity, StaticRunIsOne) {
  const TrajectoryPair p = static_pair(0.0, 1.0);
  const ExactMoore em(p);
  for (double T : {0.0, 1.0, 5.0}) {
    const ThermalState s = ThermalState::make(T, 1.0);
    for (double t : {-1.0, 0.5, 3.0}) {
      EXPECT_NEAR(adiabaticity(total_energy(em, p, t, s), adiabatic_energy(1.0, s)), 1.0, 1e-12);
    }
  }
}

TEST(Mode, VanishesAtMirrors) {
  for (const TrajectoryPair& p : {static_pair(0.0, 1.0), contraction()}) {
    const ExactMoore em(p);
    for (int k : {1, 2, 5}) {
      for (double t : {-0.5, 0.4, 1.0, 2.3}) {
        EXPECT_LT(std::abs(eval_mode(em, p, k, p.left.eval(t), t)), 1e-12);
        EXPECT_LT(std::abs(eval_mode(em, p, k, p.right.eval(t), t)), 1e-12);
      }
    }
  }
}

TEST(Mode, StaticStandingWave) {
  const double d = 1.5;
  const TrajectoryPair p = static_pair(0.0, d);
  const ExactMoore em(p);
  for (int k : {1, 3}) {
    for (double x : {0.2, 0.7, 1.1}) {
      const double t = 0.35;
      const std::complex<double> expected =
          2.0 / std::sqrt(4 * kPi * k) * std::sin(k * kPi * x / d) *
          std::exp(std::complex<double>(0, -k * kPi * t / d));
      EXPECT_NEAR(std::abs(eval_mode(em, p, k, x, t) - expected), 0.0, 1e-14);
    }
  }
}

TEST(Mode, RejectsBadInput) {
  const TrajectoryPair p = static_pair(0.0, 1.0);
  const ExactMoore em(p);
  EXPECT_THROW(eval_mode(em, p, 0, 0.5, 0.0), DomainError);
  EXPECT_THROW(eval_mode(em, p, 1, 1.5, 0.0), DomainError);
}
