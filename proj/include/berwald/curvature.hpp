#pragma once

#include <array>

#include "berwald/connection.hpp"

namespace berwald {

enum class WCorner {
  kNonZero,        // k10 != 0, a, b, c defined
  kZero,           // k7 = k8 = k9 = k10 = 0
  kK10Degenerate,  // k10 = 0 but some of k7, k8, k9 nonzero
};

// Curvature data at one (t, r). The a_i carry value and first partials;
// their second partials are NaN (they would need third derivatives of k).
struct CurvatureProfile {
  double t = 0, r = 0;
  std::array<Jet2, 12> k;
  std::array<Jet2, 14> a;  // a[0] is a1
  WCorner corner = WCorner::kZero;

  // Defined only when corner == kNonZero; zero otherwise.
  Jet2 abc_a, abc_b, abc_c;
  Jet2 D, E, F;
  Jet2 G, Gt, H, Ht;

  const Jet2& ai(int i) const { return a[static_cast<std::size_t>(i - 1)]; }
  const Jet2& ki(int i) const { return k[static_cast<std::size_t>(i - 1)]; }
  double max_abs_a() const;
};

// Classifies the w-corner with |k| <= tol counted as zero.
WCorner w_corner(const std::array<double, 12>& k, double tol);

// Throws K10Degenerate when k10 == 0 exactly but k7, k8 or k9 is not.
CurvatureProfile curvature_profile(const ConnectionProfile& conn, double t, double r);
// Same, but from precomputed jets and a tolerance for the corner test;
// never throws for a degenerate corner (the status is recorded instead).
CurvatureProfile curvature_profile(const std::array<Jet2, 12>& k, double t, double r,
                                   double corner_tol);

// R_rt - R_tr = a1 + a4 + 2 a5.
double ricci_asymmetry(const CurvatureProfile& cp);

}  // namespace berwald
