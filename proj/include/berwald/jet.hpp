#pragma once

// Truncated second-order forward-mode AD in N variables.
//
// A Taylor<N> carries f, grad f and the packed upper triangle of the
// Hessian. Entries of the Hessian may be NaN to mark "not available"
// (e.g. second partials of curvature coefficients, which would need third
// derivatives of the connection). Every rule below is entrywise in the
// Hessian, so a NaN entry never leaks into values, gradients or other
// Hessian entries.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "berwald/errors.hpp"

namespace berwald {

template <int N>
struct Taylor {
  static constexpr int kVars = N;
  static constexpr int kPacked = N * (N + 1) / 2;

  double v = 0.0;
  std::array<double, N> g{};
  std::array<double, kPacked> h{};

  Taylor() = default;
  Taylor(double value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static constexpr int index(int i, int j) {
    if (i > j) {
      const int tmp = i;
      i = j;
      j = tmp;
    }
    return i * N - i * (i - 1) / 2 + (j - i);
  }

  static Taylor variable(double value, int slot) {
    Taylor x(value);
    x.g[slot] = 1.0;
    return x;
  }

  double d(int i) const { return g[i]; }
  double dd(int i, int j) const { return h[index(i, j)]; }
  double& dd(int i, int j) { return h[index(i, j)]; }

  bool is_constant() const {
    for (double x : g) {
      if (x != 0.0) return false;
    }
    return true;
  }

  Taylor& operator+=(const Taylor& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) g[i] += o.g[i];
    for (int i = 0; i < kPacked; ++i) h[i] += o.h[i];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) g[i] -= o.g[i];
    for (int i = 0; i < kPacked; ++i) h[i] -= o.h[i];
    return *this;
  }
  Taylor& operator*=(double s) {
    v *= s;
    for (double& x : g) x *= s;
    for (double& x : h) x *= s;
    return *this;
  }
};

template <int N>
Taylor<N> operator-(Taylor<N> a) {
  a *= -1.0;
  return a;
}

template <int N>
Taylor<N> operator+(Taylor<N> a, const Taylor<N>& b) {
  a += b;
  return a;
}
template <int N>
Taylor<N> operator-(Taylor<N> a, const Taylor<N>& b) {
  a -= b;
  return a;
}
template <int N>
Taylor<N> operator+(Taylor<N> a, double b) {
  a.v += b;
  return a;
}
template <int N>
Taylor<N> operator+(double b, Taylor<N> a) {
  a.v += b;
  return a;
}
template <int N>
Taylor<N> operator-(Taylor<N> a, double b) {
  a.v -= b;
  return a;
}
template <int N>
Taylor<N> operator-(double b, const Taylor<N>& a) {
  Taylor<N> r = -a;
  r.v += b;
  return r;
}
template <int N>
Taylor<N> operator*(Taylor<N> a, double s) {
  a *= s;
  return a;
}
template <int N>
Taylor<N> operator*(double s, Taylor<N> a) {
  a *= s;
  return a;
}

template <int N>
Taylor<N> operator*(const Taylor<N>& a, const Taylor<N>& b) {
  Taylor<N> r;
  r.v = a.v * b.v;
  for (int i = 0; i < N; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      const int k = Taylor<N>::index(i, j);
      r.h[k] = a.v * b.h[k] + b.v * a.h[k] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
  }
  return r;
}

// Composition phi(a) given phi, phi', phi'' at a.v.
template <int N>
Taylor<N> compose(const Taylor<N>& a, double f0, double f1, double f2) {
  Taylor<N> r;
  r.v = f0;
  for (int i = 0; i < N; ++i) r.g[i] = f1 * a.g[i];
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      const int k = Taylor<N>::index(i, j);
      // Skip the f2 product when it is exactly zero so that a NaN-free
      // entry stays NaN-free even if f2 is infinite at a kink.
      const double curv = (a.g[i] == 0.0 || a.g[j] == 0.0) ? 0.0 : f2 * a.g[i] * a.g[j];
      r.h[k] = (f1 == 0.0 ? 0.0 : f1 * a.h[k]) + curv;
    }
  }
  return r;
}

template <int N>
Taylor<N> reciprocal(const Taylor<N>& a) {
  if (a.v == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / a.v;
  return compose(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

template <int N>
Taylor<N> operator/(const Taylor<N>& a, const Taylor<N>& b) {
  return a * reciprocal(b);
}
template <int N>
Taylor<N> operator/(const Taylor<N>& a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a * (1.0 / b);
}
template <int N>
Taylor<N> operator/(double a, const Taylor<N>& b) {
  return reciprocal(b) * a;
}

template <int N>
Taylor<N> sin(const Taylor<N>& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s);
}
template <int N>
Taylor<N> cos(const Taylor<N>& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c);
}
template <int N>
Taylor<N> tan(const Taylor<N>& a) {
  const double c = std::cos(a.v);
  if (c == 0.0) throw DomainError("tan at a pole");
  const double t = std::tan(a.v);
  const double sec2 = 1.0 + t * t;
  return compose(a, t, sec2, 2.0 * t * sec2);
}
template <int N>
Taylor<N> exp(const Taylor<N>& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}
template <int N>
Taylor<N> log(const Taylor<N>& a) {
  if (!(a.v > 0.0)) throw DomainError("ln of a non-positive value");
  const double inv = 1.0 / a.v;
  return compose(a, std::log(a.v), inv, -inv * inv);
}
template <int N>
Taylor<N> sqrt(const Taylor<N>& a) {
  if (a.v < 0.0) throw DomainError("sqrt of a negative value");
  if (a.v == 0.0) {
    if (!a.is_constant()) throw DomainError("sqrt is not differentiable at 0");
    return Taylor<N>(0.0);
  }
  const double s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}
// |a| with derivative 0 at the kink; callers that care test a.v == 0.
template <int N>
Taylor<N> abs(const Taylor<N>& a) {
  const double sg = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
  return compose(a, std::fabs(a.v), sg, 0.0);
}

// a^n for integer n. Negative bases are fine; 0^n with n < 0 is a DomainError.
template <int N>
Taylor<N> ipow(const Taylor<N>& a, long n) {
  if (n == 0) return Taylor<N>(1.0);
  if (n == 1) return a;
  if (a.v == 0.0 && n < 0) throw DomainError("zero raised to a negative power");
  const double x = a.v;
  const double dn = static_cast<double>(n);
  const double f0 = std::pow(x, dn);
  const double f1 = dn * std::pow(x, dn - 1.0);
  const double f2 = dn * (dn - 1.0) * std::pow(x, dn - 2.0);
  return compose(a, f0, f1, f2);
}

// a^c for a real constant c; requires a > 0 unless c is integral.
template <int N>
Taylor<N> cpow(const Taylor<N>& a, double c) {
  if (std::floor(c) == c && std::fabs(c) < 1e9) return ipow(a, static_cast<long>(c));
  if (!(a.v > 0.0)) throw DomainError("fractional power of a non-positive value");
  const double f0 = std::pow(a.v, c);
  return compose(a, f0, c * f0 / a.v, c * (c - 1.0) * f0 / (a.v * a.v));
}

template <int N>
Taylor<N> pow(const Taylor<N>& a, const Taylor<N>& b) {
  if (b.is_constant()) return cpow(a, b.v);
  return exp(b * log(a));
}

// Scalar overloads so templated code can run on plain doubles too.
inline double ipow(double a, long n) {
  if (a == 0.0 && n < 0) throw DomainError("zero raised to a negative power");
  return std::pow(a, static_cast<double>(n));
}
inline double cpow(double a, double c) {
  if (std::floor(c) == c && std::fabs(c) < 1e9) return ipow(a, static_cast<long>(c));
  if (!(a > 0.0)) throw DomainError("fractional power of a non-positive value");
  return std::pow(a, c);
}

// Jet2: second-order jet in (t, r); slot 0 is t, slot 1 is r.
using Jet2 = Taylor<2>;

inline double d_t(const Jet2& j) { return j.g[0]; }
inline double d_r(const Jet2& j) { return j.g[1]; }
inline double d_tt(const Jet2& j) { return j.h[0]; }
inline double d_tr(const Jet2& j) { return j.h[1]; }
inline double d_rr(const Jet2& j) { return j.h[2]; }

inline Jet2 make_jet2(double value, double dt, double dr, double dtt, double dtr, double drr) {
  Jet2 j(value);
  j.g = {dt, dr};
  j.h = {dtt, dtr, drr};
  return j;
}

// Partial of a jet as a jet whose own second partials are unknown (NaN).
inline Jet2 partial_t(const Jet2& j) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return make_jet2(d_t(j), d_tt(j), d_tr(j), nan, nan, nan);
}
inline Jet2 partial_r(const Jet2& j) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return make_jet2(d_r(j), d_tr(j), d_rr(j), nan, nan, nan);
}

// Embed a (t, r) jet into a jet over M variables where t and r occupy
// slots st and sr. Cross entries with other slots are zero.
template <int M>
Taylor<M> lift(const Jet2& j, int st, int sr) {
  Taylor<M> x(j.v);
  x.g[st] = j.g[0];
  x.g[sr] = j.g[1];
  x.dd(st, st) = j.h[0];
  x.dd(st, sr) = j.h[1];
  x.dd(sr, sr) = j.h[2];
  return x;
}

}  // namespace berwald
