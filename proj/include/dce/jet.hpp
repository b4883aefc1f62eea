#pragma once

#include <cmath>

namespace dce {

/// Truncated Taylor jet: value and first three derivatives of a scalar
/// function at one point.
template <typename Scalar>
struct Jet3 {
  Scalar v{0};
  Scalar d1{0};
  Scalar d2{0};
  Scalar d3{0};

  static constexpr Jet3 constant(Scalar c) { return {c, 0, 0, 0}; }
  static constexpr Jet3 variable(Scalar x) { return {x, 1, 0, 0}; }

  constexpr Scalar operator[](int order) const {
    switch (order) {
      case 0: return v;
      case 1: return d1;
      case 2: return d2;
      default: return d3;
    }
  }

  constexpr Jet3& operator+=(const Jet3& o) {
    v += o.v; d1 += o.d1; d2 += o.d2; d3 += o.d3;
    return *this;
  }
  constexpr Jet3& operator-=(const Jet3& o) {
    v -= o.v; d1 -= o.d1; d2 -= o.d2; d3 -= o.d3;
    return *this;
  }
  constexpr Jet3& operator*=(Scalar s) {
    v *= s; d1 *= s; d2 *= s; d3 *= s;
    return *this;
  }
};

using Jet = Jet3<double>;

template <typename S>
constexpr Jet3<S> operator+(Jet3<S> a, const Jet3<S>& b) { return a += b; }
template <typename S>
constexpr Jet3<S> operator-(Jet3<S> a, const Jet3<S>& b) { return a -= b; }
template <typename S>
constexpr Jet3<S> operator-(const Jet3<S>& a) { return {-a.v, -a.d1, -a.d2, -a.d3}; }
template <typename S>
constexpr Jet3<S> operator*(Jet3<S> a, S s) { return a *= s; }
template <typename S>
constexpr Jet3<S> operator*(S s, Jet3<S> a) { return a *= s; }
template <typename S>
constexpr Jet3<S> operator+(Jet3<S> a, S s) { a.v += s; return a; }
template <typename S>
constexpr Jet3<S> operator-(Jet3<S> a, S s) { a.v -= s; return a; }

// Leibniz rule up to third order.
template <typename S>
constexpr Jet3<S> operator*(const Jet3<S>& a, const Jet3<S>& b) {
  return {a.v * b.v,
          a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2,
          a.d3 * b.v + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.v * b.d3};
}

template <typename S>
constexpr Jet3<S> reciprocal(const Jet3<S>& a) {
  const S r = 1 / a.v;
  const S r2 = r * r;
  return {r,
          -a.d1 * r2,
          (2 * a.d1 * a.d1 * r - a.d2) * r2,
          (-6 * a.d1 * a.d1 * a.d1 * r2 + 6 * a.d1 * a.d2 * r - a.d3) * r2};
}

template <typename S>
constexpr Jet3<S> operator/(const Jet3<S>& a, const Jet3<S>& b) {
  return a * reciprocal(b);
}

/// Chain rule (Faa di Bruno to third order): `outer` is the jet of f taken
/// at `inner.v`; the result is the jet of f(g(x)).
template <typename S>
constexpr Jet3<S> compose(const Jet3<S>& outer, const Jet3<S>& inner) {
  const S g1 = inner.d1;
  const S g2 = inner.d2;
  return {outer.v,
          outer.d1 * g1,
          outer.d2 * g1 * g1 + outer.d1 * g2,
          outer.d3 * g1 * g1 * g1 + 3 * outer.d2 * g1 * g2 + outer.d1 * inner.d3};
}

/// Jet of the inverse function g^{-1} at y = g(x), given the jet of g at x.
/// Requires g'(x) != 0.
template <typename S>
constexpr Jet3<S> inverse(const Jet3<S>& g, S x) {
  const S r = 1 / g.d1;
  const S r3 = r * r * r;
  return {x,
          r,
          -g.d2 * r3,
          (3 * g.d2 * g.d2 - g.d1 * g.d3) * r3 * r * r};
}

}  // namespace dce
