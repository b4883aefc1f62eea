#pragma once

#include <vector>

#include "dce/jet.hpp"

namespace dce {

enum class Branch { F, G };

/// A pair of Moore functions F, G with derivatives to third order. The field
/// between the mirrors is built from F(t - x) and G(t + x).
class MooreFunctions {
 public:
  virtual ~MooreFunctions() = default;

  virtual Jet F(double w) const = 0;
  virtual Jet G(double z) const = 0;

  Jet eval(Branch which, double arg) const { return which == Branch::F ? F(arg) : G(arg); }

  /// Sorted arguments in [lo, hi] where the given function has a jump in a
  /// derivative above the third. Energy quadrature splits panels there.
  virtual std::vector<double> kinks(Branch which, double lo, double hi) const = 0;
};

/// Sup-norm residuals of the two functional equations
/// G(t + L) - F(t - L) = 0 and G(t + R) - F(t - R) = 2.
struct Residuals {
  double left = 0;
  double right = 0;
  double max() const { return left > right ? left : right; }
};

}  // namespace dce
