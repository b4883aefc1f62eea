#pragma once

#include <span>
#include <vector>

#include "dce/moore.hpp"
#include "dce/trajectory.hpp"

namespace dce {

enum class Mirror { left, right };

struct ExactOptions {
  /// Absolute tolerance, in time units, of every characteristic inversion.
  double tolerance = 1e-12;
};

/// Solves t + X(t) = z for the given mirror. Requires |X'| < 1 so the map is
/// strictly increasing; the root is bracketed and refined by secant steps.
double invert_advanced(const TrajectoryPair& pair, Mirror mirror, double z,
                       double tol = 1e-12);
/// Solves t - X(t) = w for the given mirror.
double invert_retarded(const TrajectoryPair& pair, Mirror mirror, double w,
                       double tol = 1e-12);

/// Exact Moore functions by backward characteristic tracing. G(z) is reduced
/// to F at the reflection off the right mirror (plus 2), F(w) to G at the
/// reflection off the left mirror, until a reflection happens before the
/// motion starts and the static solution applies. Derivatives are carried
/// through every reflection by the chain rule.
class ExactMoore final : public MooreFunctions {
 public:
  /// Throws SuperluminalError when either mirror reaches |X'| >= 1.
  explicit ExactMoore(TrajectoryPair pair, ExactOptions opt = {});

  Jet F(double w) const override;
  Jet G(double z) const override;
  std::vector<double> kinks(Branch which, double lo, double hi) const override;

  /// Backward trace with its bookkeeping, for diagnostics and tests.
  struct Trace {
    Jet value;
    /// Number of reflections off the right mirror (each adds 2).
    int round_trips = 0;
    /// Arguments visited, starting with the input; alternates G/F branches.
    std::vector<double> arguments;
    /// Branch of the final static evaluation.
    Branch terminal = Branch::F;
  };
  Trace trace(Branch which, double arg) const;

  const TrajectoryPair& pair() const { return pair_; }

 private:
  Jet solve(Branch which, double arg, Trace* trace) const;

  TrajectoryPair pair_;
  ExactOptions opt_;
  double min_length_ = 0;
  double max_extent_ = 0;
};

inline Jet solve_G(const ExactMoore& em, double z) { return em.G(z); }
inline Jet solve_F(const ExactMoore& em, double w) { return em.F(w); }

/// Sup-norm residuals of the functional equations over `times`.
Residuals residuals(const MooreFunctions& moore, const TrajectoryPair& pair,
                    std::span<const double> times);
Residuals residuals(const ExactMoore& em, std::span<const double> times);

}  // namespace dce
