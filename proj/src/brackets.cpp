#include "berwald/brackets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace berwald {

namespace {

// Coefficient of the table with its partials in t, r and theta.
struct Coef {
  double v = 0, dt = 0, dr = 0, dth = 0;
};
using LinearForm = std::array<Coef, 4>;    // R^e = sum_f C_f xdot^f
using TableEntry = std::array<LinearForm, 4>;  // indexed by e

Coef from_jet(const Jet2& j) { return {j.v, d_t(j), d_r(j), 0.0}; }

Coef times_sin2(const Jet2& j, double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  const double s2 = s * s;
  return {j.v * s2, d_t(j) * s2, d_r(j) * s2, j.v * 2.0 * s * c};
}

Coef negate(Coef c) { return {-c.v, -c.dt, -c.dr, -c.dth}; }

// Table entry for a < b.
TableEntry table(const CurvatureProfile& cp, double theta, int a, int b) {
  TableEntry T{};
  auto A = [&](int i) { return from_jet(cp.ai(i)); };
  auto S = [&](int i) { return times_sin2(cp.ai(i), theta); };
  if (a == kT && b == kR) {
    T[kT][kT] = A(1), T[kT][kR] = A(2);
    T[kR][kT] = A(3), T[kR][kR] = A(4);
    T[kTheta][kTheta] = A(5);
    T[kPhi][kPhi] = A(5);
  } else if (a == kT && b == kTheta) {
    T[kT][kTheta] = A(6);
    T[kR][kTheta] = A(7);
    T[kTheta][kT] = A(8), T[kTheta][kR] = A(9);
  } else if (a == kT && b == kPhi) {
    T[kT][kPhi] = S(6);
    T[kR][kPhi] = S(7);
    T[kPhi][kT] = A(8), T[kPhi][kR] = A(9);
  } else if (a == kR && b == kTheta) {
    T[kT][kTheta] = A(10);
    T[kR][kTheta] = A(11);
    T[kTheta][kT] = A(12), T[kTheta][kR] = A(13);
  } else if (a == kR && b == kPhi) {
    T[kT][kPhi] = S(10);
    T[kR][kPhi] = S(11);
    T[kPhi][kT] = A(12), T[kPhi][kR] = A(13);
  } else if (a == kTheta && b == kPhi) {
    T[kTheta][kPhi] = negate(S(14));
    T[kPhi][kTheta] = A(14);
  }
  return T;
}

// Entry for any ordered pair, with the sign of the antisymmetry applied.
TableEntry oriented_table(const CurvatureProfile& cp, double theta, int a, int b) {
  if (a == b) return TableEntry{};
  if (a < b) return table(cp, theta, a, b);
  TableEntry T = table(cp, theta, b, a);
  for (auto& row : T) {
    for (auto& c : row) c = negate(c);
  }
  return T;
}

void require_supported(const CurvatureProfile& cp) {
  if (cp.ki(11).v != 0.0 || cp.ki(12).v != 0.0) {
    throw UnsupportedConnection("curvature table requires k11 = k12 = 0");
  }
}

Christoffel gamma_of(const CurvatureProfile& cp, double theta) {
  std::array<double, 12> kv;
  for (std::size_t i = 0; i < 12; ++i) kv[i] = cp.k[i].v;
  return christoffel(kv, theta);
}

const char* coord_name(int i) {
  static const char* names[] = {"t", "r", "theta", "phi"};
  return names[i];
}

}  // namespace

std::string BracketVector::name() const {
  if (label.size() == 2) {
    return std::string("[") + coord_name(label[0]) + "," + coord_name(label[1]) + "]";
  }
  return std::string("[") + coord_name(label[0]) + ",[" + coord_name(label[1]) + "," +
         coord_name(label[2]) + "]]";
}

Vec4 bracket(const CurvatureProfile& cp, const TangentPoint& p, int a, int b) {
  require_supported(cp);
  const TableEntry T = oriented_table(cp, p.theta, a, b);
  const Vec4 xd = p.v();
  Vec4 out{};
  for (int e = 0; e < 4; ++e) {
    for (int f = 0; f < 4; ++f) out[e] += T[e][f].v * xd[f];
  }
  return out;
}

Vec4 bracket2(const CurvatureProfile& cp, const TangentPoint& p, int c, int a, int b) {
  require_supported(cp);
  const TableEntry T = oriented_table(cp, p.theta, a, b);
  const Christoffel G = gamma_of(cp, p.theta);
  const Vec4 xd = p.v();

  // N^d_c = Gamma^d_cg xdot^g
  Vec4 N{};
  for (int d = 0; d < 4; ++d) {
    for (int g = 0; g < 4; ++g) N[d] += G[d][c][g] * xd[g];
  }
  // V^d = C^d_f xdot^f
  Vec4 V{};
  for (int d = 0; d < 4; ++d) {
    for (int f = 0; f < 4; ++f) V[d] += T[d][f].v * xd[f];
  }

  Vec4 out{};
  for (int e = 0; e < 4; ++e) {
    double acc = 0.0;
    for (int f = 0; f < 4; ++f) {
      const Coef& C = T[e][f];
      const double dC = c == kT ? C.dt : c == kR ? C.dr : c == kTheta ? C.dth : 0.0;
      acc += dC * xd[f];
    }
    for (int d = 0; d < 4; ++d) acc -= N[d] * T[e][d].v;
    for (int d = 0; d < 4; ++d) acc += G[e][c][d] * V[d];
    out[e] = acc;
  }
  return out;
}

std::vector<BracketVector> bracket_vectors(const CurvatureProfile& cp, const TangentPoint& p,
                                           int depth) {
  std::vector<BracketVector> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) out.push_back({{a, b}, bracket(cp, p, a, b)});
  }
  if (depth >= 2) {
    for (int c = 0; c < 4; ++c) {
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) out.push_back({{c, a, b}, bracket2(cp, p, c, a, b)});
      }
    }
  }
  return out;
}

std::vector<BracketVector> bracket_vectors(const ConnectionProfile& conn, const TangentPoint& p,
                                           int depth) {
  return bracket_vectors(curvature_profile(conn.jets(p.t, p.r), p.t, p.r, 0.0), p, depth);
}

int numerical_rank(const std::vector<Vec4>& rows, double rel_tol) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), 4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < 4; ++j) M(static_cast<Eigen::Index>(i), j) = rows[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  const double cutoff = rel_tol * std::max(s.size() ? s(0) : 0.0, 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++rank;
  }
  return rank;
}

RankResult vertical_holonomy_rank(const ConnectionProfile& conn,
                                  const std::vector<TangentPoint>& samples, double rel_tol) {
  if (samples.size() < 20) {
    throw InsufficientSamples("holonomy rank needs at least 20 samples, got " +
                              std::to_string(samples.size()));
  }
  RankResult res;
  res.tolerance = rel_tol;
  for (const TangentPoint& p : samples) {
    std::vector<Vec4> rows;
    for (const BracketVector& bv : bracket_vectors(conn, p, 2)) rows.push_back(bv.v);
    res.raw_rank = std::max(res.raw_rank, numerical_rank(rows, rel_tol));
  }
  res.rank = std::min(res.raw_rank, 3);
  return res;
}

}  // namespace berwald
