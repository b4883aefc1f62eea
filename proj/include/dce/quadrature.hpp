#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>

namespace dce::quad {

/// Composite Simpson estimate over samples taken at 2m+1 uniformly spaced
/// nodes spanning [a, b]. `stride` selects every k-th sample so the same
/// sample vector yields the coarse estimate of a doubling pair.
inline double simpson(const Eigen::Ref<const Eigen::VectorXd>& samples, double a, double b,
                      Eigen::Index stride = 1) {
  const Eigen::Index n = (samples.size() - 1) / stride;  // number of intervals
  const double h = (b - a) / static_cast<double>(n);
  double odd = 0, even = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    (i % 2 ? odd : even) += samples[i * stride];
  }
  return h / 3.0 * (samples[0] + samples[n * stride] + 4.0 * odd + 2.0 * even);
}

/// Integral over [a, b] with `intervals` (even) Simpson intervals, plus the
/// estimate at half resolution so the caller can judge convergence.
struct Estimate {
  double value;
  double coarse;
};

template <typename Fn>
Estimate simpson_pair(Fn&& f, double a, double b, Eigen::Index intervals) {
  if (intervals % 4 != 0) intervals += 4 - intervals % 4;
  Eigen::VectorXd y(intervals + 1);
  const double h = (b - a) / static_cast<double>(intervals);
  for (Eigen::Index i = 0; i <= intervals; ++i) {
    y[i] = f(i == intervals ? b : a + h * static_cast<double>(i));
  }
  return {simpson(y, a, b, 1), simpson(y, a, b, 2)};
}

}  // namespace dce::quad
