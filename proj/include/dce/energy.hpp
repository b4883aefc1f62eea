#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dce/moore.hpp"
#include "dce/trajectory.hpp"

namespace dce {

/// Z(x) = sum_{n >= 1} n pi / (exp(n pi / x) - 1), x = T d0. Zero at x = 0.
double thermal_Z(double x);

struct ThermalState {
  double T = 0;
  double d0 = 1;
  double Z = 0;

  static ThermalState make(double T, double d0);
  /// The factor multiplying (F'^2 + G'^2)/2 in the density.
  double kinetic_weight() const;
};

/// Density split as anomaly + kinetic * (-pi/24 + Z): the anomaly part holds
/// the -(1/24 pi)[f'''/f' - 3/2 (f''/f')^2] terms, kinetic is (F'^2 + G'^2)/2.
/// Temperatures then share one evaluation.
struct DensityParts {
  double anomaly = 0;
  double kinetic = 0;

  double combine(const ThermalState& s) const { return anomaly + kinetic * s.kinetic_weight(); }
};

/// Throws DomainError when x is outside [L(t), R(t)] or a slope vanishes.
DensityParts density_parts(const MooreFunctions& moore, const TrajectoryPair& pair, double x,
                           double t);
double density(const MooreFunctions& moore, const TrajectoryPair& pair, double x, double t,
               const ThermalState& state);

struct QuadratureOptions {
  /// Simpson nodes per kink-free panel before the doubling check.
  int points = 2001;
  double rel_tol = 1e-8;
  int max_doublings = 4;
};

struct EnergyParts {
  DensityParts integral;
  /// False when the doubling check never met the tolerance.
  bool converged = true;

  double combine(const ThermalState& s) const { return integral.combine(s); }
};

/// Integral of the density across the cavity at time t. Panels are split at
/// every abscissa where t + x or t - x hits a kink of G or F.
EnergyParts total_energy_parts(const MooreFunctions& moore, const TrajectoryPair& pair, double t,
                               const QuadratureOptions& opt = {});
double total_energy(const MooreFunctions& moore, const TrajectoryPair& pair, double t,
                    const ThermalState& state, const QuadratureOptions& opt = {});

/// -pi/(24 d) + Z(T d0)/d. Throws DomainError for d <= 0.
double adiabatic_energy(double d, const ThermalState& state);

/// Q = E / E_ad. Throws DomainError when E_ad vanishes.
double adiabaticity(double E, double E_ad);

/// psi_k = i/sqrt(4 pi k) [exp(-i k pi G(t + x)) - exp(-i k pi F(t - x))],
/// which vanishes on both mirrors.
std::complex<double> eval_mode(const MooreFunctions& moore, const TrajectoryPair& pair, int k,
                               double x, double t);

/// Energies and adiabaticity on a shared time grid, one row per temperature.
struct EnergyRecord {
  std::vector<double> times;
  std::vector<double> temperatures;
  /// Indexed [temperature][time].
  std::vector<std::vector<double>> E_ref, E_eff, E_ad, Q_ref, Q_eff;
  bool converged = true;
};

}  // namespace dce
