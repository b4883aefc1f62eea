#include "dce/moore_adiabatic.hpp"

#include <algorithm>
#include <cmath>

#include "dce/errors.hpp"

namespace dce {

namespace {

double inv_length(const TrajectoryPair& pair, double t) {
  const double d = pair.length(t);
  if (!(d > 0.0)) throw GeometryError("cavity length must stay positive");
  return 1.0 / d;
}

Eigen::VectorXd cumulative_table(const TrajectoryPair& pair, double t0, double t1, int panels,
                                 double start_value) {
  Eigen::VectorXd table(panels + 1);
  const double h = (t1 - t0) / panels;
  table[0] = start_value;
  double f_lo = inv_length(pair, t0);
  for (int i = 0; i < panels; ++i) {
    const double a = t0 + h * i;
    const double b = i + 1 == panels ? t1 : a + h;
    const double f_mid = inv_length(pair, 0.5 * (a + b));
    const double f_hi = inv_length(pair, b);
    table[i + 1] = table[i] + (b - a) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
    f_lo = f_hi;
  }
  return table;
}

}  // namespace

AdiabaticMoore AdiabaticMoore::build(const TrajectoryPair& pair, const AdiabaticOptions& opt) {
  if (!(pair.d0() > 0.0) || !(pair.df() > 0.0)) {
    throw GeometryError("cavity length must stay positive");
  }
  AdiabaticMoore am;
  am.pair_ = pair;
  am.t0_ = pair.motion_start();
  am.t1_ = pair.motion_end();
  const double start_value = am.t0_ / pair.d0();
  if (am.t1_ > am.t0_) {
    int panels = std::max(opt.panels, 2);
    Eigen::VectorXd table = cumulative_table(pair, am.t0_, am.t1_, panels, start_value);
    for (int k = 0; k < opt.max_doublings; ++k) {
      Eigen::VectorXd finer = cumulative_table(pair, am.t0_, am.t1_, 2 * panels, start_value);
      const double change = std::abs(finer[finer.size() - 1] - table[table.size() - 1]);
      table = std::move(finer);
      panels *= 2;
      if (change < opt.agreement) break;
      if (k + 1 == opt.max_doublings) {
        throw ConvergenceError("adiabatic integral did not converge under panel doubling");
      }
    }
    am.table_ = std::move(table);
    am.h_ = (am.t1_ - am.t0_) / panels;
  } else {
    am.table_ = Eigen::VectorXd::Constant(1, start_value);
  }

  const Eigen::Index nodes = am.table_.size();
  am.min_slope_ = 1.0 / std::max(pair.d0(), pair.df());
  for (Eigen::Index i = 0; i < nodes && am.t1_ > am.t0_; ++i) {
    const double t = am.t0_ + am.h_ * static_cast<double>(i);
    am.min_slope_ = std::min({am.min_slope_, am.F(t).d1, am.G(t).d1});
  }
  return am;
}

double AdiabaticMoore::integral(double t) const {
  if (t <= t0_) return t / pair_.d0();
  if (t >= t1_) return table_[table_.size() - 1] + (t - t1_) / pair_.df();
  const auto last = static_cast<double>(table_.size() - 2);
  const double pos = std::min(std::floor((t - t0_) / h_), last);
  const double a = t0_ + h_ * pos;
  const double base = table_[static_cast<Eigen::Index>(pos)];
  if (t == a) return base;
  // Simpson on the partial panel [a, t]; the table already holds [t0, a].
  const double fa = inv_length(pair_, a);
  const double fm = inv_length(pair_, 0.5 * (a + t));
  const double ft = inv_length(pair_, t);
  return base + (t - a) / 6.0 * (fa + 4.0 * fm + ft);
}

void AdiabaticMoore::shape_jets(double t, Jet& half_ratio, Jet& inv_len) const {
  const Jet L = pair_.left.jet(t);
  const Jet R = pair_.right.jet(t);
  const Jet d = R - L;
  if (!(d.v > 0.0)) throw GeometryError("cavity length must stay positive");
  inv_len = reciprocal(d);
  half_ratio = 0.5 * ((R + L) * inv_len);
}

Jet AdiabaticMoore::F(double w) const {
  Jet half_ratio, inv_len;
  shape_jets(w, half_ratio, inv_len);
  const Jet I{integral(w), inv_len.v, inv_len.d1, inv_len.d2};
  return I + half_ratio - 0.5;
}

Jet AdiabaticMoore::G(double z) const {
  Jet half_ratio, inv_len;
  shape_jets(z, half_ratio, inv_len);
  const Jet I{integral(z), inv_len.v, inv_len.d1, inv_len.d2};
  return I - half_ratio + 0.5;
}

std::vector<double> AdiabaticMoore::kinks(Branch, double lo, double hi) const {
  std::vector<double> out;
  for (const auto* path : {&pair_.left, &pair_.right}) {
    for (double t : path->breakpoints()) {
      if (t >= lo && t <= hi) out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double eval_moore(const AdiabaticMoore& am, Branch which, double z, int order) {
  if (order < 0 || order > 3) throw DomainError("derivative order must be 0..3");
  return am.eval(which, z)[order];
}

Residuals adiabatic_residual(const AdiabaticMoore& am, const TrajectoryPair& pair,
                             std::span<const double> times) {
  Residuals r;
  for (double t : times) {
    const double L = pair.left.eval(t);
    const double R = pair.right.eval(t);
    r.left = std::max(r.left, std::abs(am.G(t + L).v - am.F(t - L).v));
    r.right = std::max(r.right, std::abs(am.G(t + R).v - am.F(t - R).v - 2.0));
  }
  return r;
}

}  // namespace dce
