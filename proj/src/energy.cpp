#include "dce/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dce/errors.hpp"
#include "dce/quadrature.hpp"

namespace dce {

namespace {

constexpr double kPi = std::numbers::pi;

// -(1/24 pi) [f'''/f' - 3/2 (f''/f')^2] and f'^2 / 2.
DensityParts branch_parts(const Jet& f) {
  if (!(std::abs(f.d1) >= 1e-12)) {
    throw DomainError("Moore function slope vanishes; energy density undefined");
  }
  const double r2 = f.d2 / f.d1;
  const double r3 = f.d3 / f.d1;
  return {-(r3 - 1.5 * r2 * r2) / (24.0 * kPi), 0.5 * f.d1 * f.d1};
}

void check_inside(const TrajectoryPair& pair, double x, double t) {
  const double L = pair.left.eval(t);
  const double R = pair.right.eval(t);
  const double slack = 1e-12 * std::max({1.0, std::abs(L), std::abs(R)});
  if (x < L - slack || x > R + slack) {
    throw DomainError("x = " + std::to_string(x) + " is outside the cavity at t = " +
                      std::to_string(t));
  }
}

}  // namespace

double thermal_Z(double x) {
  if (x < 0.0) throw DomainError("thermal sum needs T d0 >= 0");
  if (x == 0.0) return 0.0;
  double sum = 0.0;
  for (int n = 1; n < 100000; ++n) {
    const double term = n * kPi / std::expm1(n * kPi / x);
    sum += term;
    if (term < 1e-15 * (1.0 + sum)) break;
  }
  return sum;
}

ThermalState ThermalState::make(double T, double d0) {
  if (!(d0 > 0.0)) throw DomainError("initial length must be positive");
  return {T, d0, thermal_Z(T * d0)};
}

double ThermalState::kinetic_weight() const { return -kPi / 24.0 + Z; }

DensityParts density_parts(const MooreFunctions& moore, const TrajectoryPair& pair, double x,
                           double t) {
  check_inside(pair, x, t);
  const DensityParts g = branch_parts(moore.G(t + x));
  const DensityParts f = branch_parts(moore.F(t - x));
  return {g.anomaly + f.anomaly, g.kinetic + f.kinetic};
}

double density(const MooreFunctions& moore, const TrajectoryPair& pair, double x, double t,
               const ThermalState& state) {
  return density_parts(moore, pair, x, t).combine(state);
}

EnergyParts total_energy_parts(const MooreFunctions& moore, const TrajectoryPair& pair, double t,
                               const QuadratureOptions& opt) {
  const double L = pair.left.eval(t);
  const double R = pair.right.eval(t);
  std::vector<double> cuts{L, R};
  for (double z : moore.kinks(Branch::G, t + L, t + R)) cuts.push_back(z - t);
  for (double w : moore.kinks(Branch::F, t - R, t - L)) cuts.push_back(t - w);
  std::sort(cuts.begin(), cuts.end());
  const double min_gap = 1e-12 * std::max(1.0, R - L);
  std::vector<double> panels{L};
  for (double c : cuts) {
    if (c > L + min_gap && c < R - min_gap && c - panels.back() > min_gap) panels.push_back(c);
  }
  panels.push_back(R);

  EnergyParts out;
  for (std::size_t p = 0; p + 1 < panels.size(); ++p) {
    const double a = panels[p], b = panels[p + 1];
    // Both parts from one pass over the nodes.
    Eigen::Index intervals = 2 * (opt.points - 1);
    for (int level = 0;; ++level) {
      if (intervals % 4 != 0) intervals += 4 - intervals % 4;
      Eigen::VectorXd an(intervals + 1), kin(intervals + 1);
      const double h = (b - a) / static_cast<double>(intervals);
      for (Eigen::Index i = 0; i <= intervals; ++i) {
        const double x = i == intervals ? b : a + h * static_cast<double>(i);
        const DensityParts d = density_parts(moore, pair, x, t);
        an[i] = d.anomaly;
        kin[i] = d.kinetic;
      }
      const double an_fine = quad::simpson(an, a, b, 1), an_coarse = quad::simpson(an, a, b, 2);
      const double k_fine = quad::simpson(kin, a, b, 1), k_coarse = quad::simpson(kin, a, b, 2);
      // Judge the zero-temperature combination; warmer states weigh the
      // smooth kinetic part more and converge no worse.
      const double w = kPi / 24.0;
      const double scale = std::max(std::abs(an_fine - w * k_fine), 1e-300);
      const bool ok =
          std::abs(an_fine - an_coarse) + w * std::abs(k_fine - k_coarse) <= opt.rel_tol * scale;
      if (ok || level >= opt.max_doublings) {
        out.integral.anomaly += an_fine;
        out.integral.kinetic += k_fine;
        out.converged = out.converged && ok;
        break;
      }
      intervals *= 2;
    }
  }
  return out;
}

double total_energy(const MooreFunctions& moore, const TrajectoryPair& pair, double t,
                    const ThermalState& state, const QuadratureOptions& opt) {
  return total_energy_parts(moore, pair, t, opt).combine(state);
}

double adiabatic_energy(double d, const ThermalState& state) {
  if (!(d > 0.0)) throw DomainError("adiabatic energy needs a positive length");
  return (-kPi / 24.0 + state.Z) / d;
}

double adiabaticity(double E, double E_ad) {
  if (E_ad == 0.0) {
    throw DomainError("adiabatic energy vanishes (Casimir and thermal terms cancel)");
  }
  return E / E_ad;
}

std::complex<double> eval_mode(const MooreFunctions& moore, const TrajectoryPair& pair, int k,
                               double x, double t) {
  if (k < 1) throw DomainError("mode index must be positive");
  check_inside(pair, x, t);
  using namespace std::complex_literals;
  const double kp = k * kPi;
  const double g = moore.G(t + x).v;
  const double f = moore.F(t - x).v;
  return 1i / std::sqrt(4.0 * kPi * k) * (std::exp(-1i * kp * g) - std::exp(-1i * kp * f));
}

}  // namespace dce
