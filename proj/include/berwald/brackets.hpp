#pragma once

// Vertical parts of Lie brackets of the adapted horizontal fields
// delta_a = d_a - N^b_a dd_b, assembled from the curvature table and the
// first partials of the a_i.

#include <string>
#include <vector>

#include "berwald/curvature.hpp"

namespace berwald {

struct BracketVector {
  // {a, b} for [delta_a, delta_b]; {c, a, b} for [delta_c, [delta_a, delta_b]].
  std::vector<int> label;
  Vec4 v{};

  std::string name() const;
};

// [delta_a, delta_b] from the table (any a, b; antisymmetric, zero on the diagonal).
Vec4 bracket(const CurvatureProfile& cp, const TangentPoint& p, int a, int b);
// [delta_c, [delta_a, delta_b]].
Vec4 bracket2(const CurvatureProfile& cp, const TangentPoint& p, int c, int a, int b);

// depth 1: the six [delta_a, delta_b], a < b. depth 2: additionally the 24
// [delta_c, [delta_a, delta_b]]. Throws UnsupportedConnection if k11 or k12
// is nonzero at the point (the table does not cover them).
std::vector<BracketVector> bracket_vectors(const CurvatureProfile& cp, const TangentPoint& p,
                                           int depth);
std::vector<BracketVector> bracket_vectors(const ConnectionProfile& conn, const TangentPoint& p,
                                           int depth);

struct RankResult {
  int rank = 0;        // max over samples, capped at 3
  int raw_rank = 0;    // uncapped max over samples
  double tolerance = 1e-8;
};

// Numerical rank: singular values <= rel_tol * max(sigma_max, 1) count as zero.
int numerical_rank(const std::vector<Vec4>& rows, double rel_tol);

RankResult vertical_holonomy_rank(const ConnectionProfile& conn,
                                  const std::vector<TangentPoint>& samples,
                                  double rel_tol = 1e-8);

}  // namespace berwald
