#pragma once

#include <Eigen/Core>
#include <span>

#include "dce/moore.hpp"
#include "dce/trajectory.hpp"

namespace dce {

struct AdiabaticOptions {
  int panels = 4096;
  /// Panels are doubled until the integral over the motion window changes by
  /// less than this.
  double agreement = 1e-10;
  int max_doublings = 10;
};

/// First-order adiabatic Moore functions of a trajectory pair,
///   F_ad = I + (R + L) / (2 (R - L)) - 1/2,
///   G_ad = I - (R + L) / (2 (R - L)) + 1/2,
/// with I(t) the integral of 1/(R - L) anchored so that I(t) = t / d0 before
/// the motion. The constants make both functions reduce to the static ones,
/// (t + L0)/d0 and (t - L0)/d0, for times before the motion starts.
///
/// I is tabulated by cumulative Simpson on the motion window and continued
/// exactly (linearly) outside it, so every real argument is valid. Orders
/// one to three are analytic in the mirror derivatives.
class AdiabaticMoore final : public MooreFunctions {
 public:
  static AdiabaticMoore build(const TrajectoryPair& pair, const AdiabaticOptions& opt = {});

  Jet F(double w) const override;
  Jet G(double z) const override;
  std::vector<double> kinks(Branch which, double lo, double hi) const override;

  /// I(t) = integral of 1/(R - L).
  double integral(double t) const;
  const TrajectoryPair& pair() const { return pair_; }
  int panels() const { return static_cast<int>(table_.size()) - 1; }
  /// Smallest of F', G' over the table nodes; the construction needs both
  /// positive.
  double min_slope() const { return min_slope_; }

 private:
  AdiabaticMoore() = default;
  /// Jet of (R + L) / (2 (R - L)) and of 1 / (R - L) at t.
  void shape_jets(double t, Jet& half_ratio, Jet& inv_length) const;

  TrajectoryPair pair_;
  double t0_ = 0;
  double t1_ = 0;
  double h_ = 0;
  Eigen::VectorXd table_;
  double min_slope_ = 0;
};

/// Order-th derivative of F_ad or G_ad at z.
double eval_moore(const AdiabaticMoore& am, Branch which, double z, int order);

/// Sup over `times` of the adiabatic functions' residuals in the two
/// functional equations, for the mirror motion `pair`.
Residuals adiabatic_residual(const AdiabaticMoore& am, const TrajectoryPair& pair,
                             std::span<const double> times);

}  // namespace dce
