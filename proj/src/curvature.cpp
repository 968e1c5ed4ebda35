#include "berwald/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace berwald {

double CurvatureProfile::max_abs_a() const {
  double m = 0.0;
  for (const Jet2& x : a) m = std::max(m, std::fabs(x.v));
  return m;
}

WCorner w_corner(const std::array<double, 12>& k, double tol) {
  const bool k10_zero = std::fabs(k[9]) <= tol;
  if (!k10_zero) return WCorner::kNonZero;
  const bool rest_zero =
      std::fabs(k[6]) <= tol && std::fabs(k[7]) <= tol && std::fabs(k[8]) <= tol;
  return rest_zero ? WCorner::kZero : WCorner::kK10Degenerate;
}

CurvatureProfile curvature_profile(const ConnectionProfile& conn, double t, double r) {
  CurvatureProfile cp = curvature_profile(conn.jets(t, r), t, r, 0.0);
  if (cp.corner == WCorner::kK10Degenerate) {
    throw K10Degenerate("k10 = 0 while k7, k8 or k9 is nonzero at (t, r) = (" +
                        std::to_string(t) + ", " + std::to_string(r) + ")");
  }
  return cp;
}

CurvatureProfile curvature_profile(const std::array<Jet2, 12>& kj, double t, double r,
                                   double corner_tol) {
  CurvatureProfile cp;
  cp.t = t;
  cp.r = r;
  cp.k = kj;
  const Jet2 &k1 = kj[0], &k2 = kj[1], &k3 = kj[2], &k4 = kj[3], &k5 = kj[4], &k6 = kj[5];
  const Jet2 &k7 = kj[6], &k8 = kj[7], &k9 = kj[8], &k10 = kj[9];
  auto dt = [](const Jet2& j) { return partial_t(j); };
  auto dr = [](const Jet2& j) { return partial_r(j); };

  auto& a = cp.a;
  a[0] = dr(k1) - dt(k2) + k3 * k4 - k2 * k6;
  a[1] = dr(k2) - dt(k3) + k2 * k2 + k3 * k6 - k1 * k3 - k2 * k5;
  a[2] = dr(k4) - dt(k6) + k1 * k6 + k4 * k5 - k2 * k4 - k6 * k6;
  a[3] = dr(k6) - dt(k5) + k2 * k6 - k3 * k4;
  a[4] = dr(k8) - dt(k9);
  a[5] = -dt(k7) + k7 * k8 - k1 * k7 - k2 * k10;
  a[6] = -dt(k10) + k8 * k10 - k4 * k7 - k6 * k10;
  a[7] = -dt(k8) + k1 * k8 + k4 * k9 - k8 * k8;
  a[8] = -dt(k9) + k2 * k8 + k6 * k9 - k8 * k9;
  a[9] = -dr(k7) + k7 * k9 - k2 * k7 - k3 * k10;
  a[10] = -dr(k10) + k9 * k10 - k6 * k7 - k5 * k10;
  a[11] = -dr(k8) + k2 * k8 + k6 * k9 - k8 * k9;
  a[12] = -dr(k9) + k3 * k8 + k5 * k9 - k9 * k9;
  a[13] = 1.0 + k7 * k8 + k9 * k10;

  std::array<double, 12> kv;
  for (std::size_t i = 0; i < 12; ++i) kv[i] = kj[i].v;
  cp.corner = w_corner(kv, corner_tol);
  if (cp.corner != WCorner::kNonZero) return cp;

  cp.abc_a = k7 / k10;
  cp.abc_b = k8 / k10;
  cp.abc_c = (k9 * k10 - k7 * k8) / (k10 * k10);
  const Jet2 &A = cp.abc_a, &B = cp.abc_b;
  cp.D = A * a[2] - a[0] + a[4];
  cp.E = B * a[2];
  cp.F = A * a[2] - a[0];
  cp.G = 2.0 * (k1 - k4 * A);
  cp.Gt = cp.G - 2.0 * k8;
  cp.H = 2.0 * (k2 - k6 * A);
  cp.Ht = cp.H - 2.0 * k9;
  return cp;
}

double ricci_asymmetry(const CurvatureProfile& cp) {
  return cp.a[0].v + cp.a[3].v + 2.0 * cp.a[4].v;
}

}  // namespace berwald
