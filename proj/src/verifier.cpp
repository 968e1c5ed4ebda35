#include "berwald/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berwald/brackets.hpp"
#include "berwald/errors.hpp"

namespace berwald {

namespace {

std::vector<double> coords(const TangentPoint& p) {
  return {p.t, p.r, p.theta, p.phi, p.tdot, p.rdot, p.thetadot, p.phidot};
}

bool evaluable(const FinslerFunction& L, const TangentPoint& p, Jet8* out) {
  if (!L.in_domain(p)) return false;
  try {
    *out = L.evaluate(p);
  } catch (const DomainError&) {
    return false;
  }
  return std::isfinite(out->v);
}

Eigen::Matrix4d half_velocity_hessian(const Jet8& J) {
  Eigen::Matrix4d g;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) g(a, b) = 0.5 * J.dd(4 + a, 4 + b);
  }
  return g;
}

}  // namespace

Residual check_horizontal_constancy(const FinslerFunction& L, const ConnectionProfile& conn,
                                    const std::vector<TangentPoint>& samples, double tol) {
  Residual res;
  res.name = "horizontal_constancy";
  res.tolerance = tol;
  for (const TangentPoint& p : samples) {
    Jet8 J;
    if (!evaluable(L, p, &J)) {
      ++res.skipped;
      continue;
    }
    const Christoffel gam = christoffel(conn, p.t, p.r, p.theta);
    const Vec4 v = p.v();
    double worst = 0.0;
    for (int a = 0; a < 4; ++a) {
      double delta = J.d(a);
      for (int c = 0; c < 4; ++c) {
        double N = 0.0;
        for (int b = 0; b < 4; ++b) N += gam[c][a][b] * v[b];
        delta -= N * J.d(4 + c);
      }
      worst = std::max(worst, std::fabs(delta));
    }
    res.update(worst / (1.0 + std::fabs(J.v)), coords(p));
  }
  return res;
}

Eigen::Matrix4d vertical_metric(const FinslerFunction& L, const TangentPoint& p) {
  return half_velocity_hessian(L.evaluate(p));
}

std::string signature_of(const Eigen::Matrix4d& g) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g, Eigen::EigenvaluesOnly);
  const Eigen::Vector4d ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  std::string out = "(";
  for (int i = 3; i >= 0; --i) {
    const double x = ev(i);
    out += std::fabs(x) <= 1e-12 * scale ? "0" : (x > 0 ? "+" : "-");
    if (i > 0) out += ",";
  }
  return out + ")";
}

HessianReport check_hessian(const FinslerFunction& L, const std::vector<TangentPoint>& samples,
                            double det_min) {
  HessianReport rep;
  rep.det_min = det_min;
  rep.min_abs_det = std::numeric_limits<double>::infinity();
  for (const TangentPoint& p : samples) {
    Jet8 J;
    if (!evaluable(L, p, &J)) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    const Eigen::Matrix4d g = half_velocity_hessian(J);
    const double det = std::fabs(g.determinant());
    const std::string sig = signature_of(g);
    if (rep.signature.empty()) rep.signature = sig;
    if (sig != rep.signature) rep.signature_constant = false;
    const double d = std::isnan(det) ? 0.0 : det;
    if (rep.where.empty() || d < rep.min_abs_det) {
      rep.min_abs_det = d;
      rep.where = coords(p);
    }
  }
  if (rep.samples == 0) throw InsufficientSamples("no sample inside the domain of L");
  if (!(rep.min_abs_det > det_min)) {
    std::string w;
    for (double x : rep.where) w += (w.empty() ? "" : ", ") + std::to_string(x);
    throw Degenerate("|det g| = " + std::to_string(rep.min_abs_det) + " at (" + w + ")");
  }
  return rep;
}

Christoffel levi_civita(const RiemannForm& A, double t, double r, double theta) {
  const MetricJet mj = A.metric_jet(t, r, theta);
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(mj.g);
  if (!lu.isInvertible()) throw Degenerate("metric is singular");
  const Eigen::Matrix4d ginv = lu.inverse();
  Christoffel out{};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        double s = 0.0;
        for (int d = 0; d < 4; ++d) {
          s += ginv(a, d) * (mj.dg[b](d, c) + mj.dg[c](d, b) - mj.dg[d](b, c));
        }
        out[a][b][c] = 0.5 * s;
      }
    }
  }
  return out;
}

Residual levi_civita_roundtrip(const RiemannForm& A, const ConnectionProfile& conn,
                               const std::vector<TangentPoint>& samples, double tol) {
  Residual res;
  res.name = "levi_civita_roundtrip";
  res.tolerance = tol;
  for (const TangentPoint& p : samples) {
    const Christoffel lc = levi_civita(A, p.t, p.r, p.theta);
    const Christoffel ref = christoffel(conn, p.t, p.r, p.theta);
    double worst = 0.0;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int c = 0; c < 4; ++c) {
          worst = std::max(worst, std::fabs(lc[a][b][c] - ref[a][b][c]) /
                                      (1.0 + std::fabs(ref[a][b][c])));
        }
      }
    }
    res.update(worst, {p.t, p.r, p.theta});
  }
  return res;
}

Vec4 finsler_spray(const FinslerFunction& L, const TangentPoint& p) {
  const Jet8 J = L.evaluate(p);
  const Eigen::Matrix4d g = half_velocity_hessian(J);
  const Vec4 v = p.v();
  Eigen::Vector4d rhs;
  for (int b = 0; b < 4; ++b) {
    double s = -J.d(b);
    for (int c = 0; c < 4; ++c) s += v[c] * J.dd(c, 4 + b);
    rhs(b) = s;
  }
  const Eigen::Vector4d G = 0.25 * g.fullPivLu().solve(rhs);
  return {G(0), G(1), G(2), G(3)};
}

Residual berwald_check(const FinslerFunction& L, const std::vector<TangentPoint>& samples,
                       double tol) {
  Residual res;
  res.name = "berwald";
  res.tolerance = tol;
  const double h = 0.05;
  const Vec4 dirs[5] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0.5, 0.5, 0.5, 0.5}};
  const double weights[4] = {-1.0, 3.0, -3.0, 1.0};
  const double offsets[4] = {-1.5, -0.5, 0.5, 1.5};
  for (const TangentPoint& p : samples) {
    double worst = 0.0;
    bool usable = L.in_domain(p);
    if (usable) {
      try {
        const Vec4 G0 = finsler_spray(L, p);
        double scale = 1.0;
        for (double x : G0) scale = std::max(scale, 1.0 + std::fabs(x));
        for (const Vec4& e : dirs) {
          Vec4 d3{};
          for (int m = 0; m < 4 && usable; ++m) {
            TangentPoint q = p;
            q.tdot += offsets[m] * h * e[0];
            q.rdot += offsets[m] * h * e[1];
            q.thetadot += offsets[m] * h * e[2];
            q.phidot += offsets[m] * h * e[3];
            if (!L.in_domain(q)) {
              usable = false;
              break;
            }
            const Vec4 G = finsler_spray(L, q);
            for (int c = 0; c < 4; ++c) d3[c] += weights[m] * G[c];
          }
          for (double x : d3) worst = std::max(worst, std::fabs(x) / (h * h * h) / scale);
        }
      } catch (const DomainError&) {
        usable = false;
      }
    }
    if (!usable) {
      ++res.skipped;
      continue;
    }
    res.update(worst, coords(p));
  }
  return res;
}

GeodesicAgreement geodesic_agreement(const FinslerFunction& L, const ConnectionProfile& conn,
                                     const TangentPoint& p0, double T, double tol,
                                     double drift_tol, int n_out) {
  GeodesicAgreement out;
  out.discrepancy.name = "geodesic_discrepancy";
  out.discrepancy.tolerance = tol;
  out.drift.name = "L_drift";
  out.drift.tolerance = drift_tol;

  out.autoparallel = integrate_spray(conn, p0, T, n_out);
  out.autoparallel.require_complete();
  out.finsler = integrate([&L](const TangentPoint& p) { return finsler_spray(L, p); }, p0, T, n_out);
  out.finsler.require_complete();
  out.discrepancy.update(sup_discrepancy(out.autoparallel, out.finsler), coords(p0));

  const double L0 = L.value(p0);
  const double norm = std::fabs(L0) < 1e-12 ? 1.0 : std::fabs(L0);
  for (std::size_t k = 0; k < out.autoparallel.states.size(); ++k) {
    const TangentPoint& p = out.autoparallel.states[k];
    double d = std::numeric_limits<double>::infinity();
    try {
      d = std::fabs(L.value(p) - L0) / norm;
    } catch (const DomainError&) {
    }
    out.drift.update(d, coords(p));
  }
  return out;
}

QuadraticFit quadratic_fit(const ConnectionProfile& conn, double t, double r, double theta,
                           std::size_t velocities, std::uint64_t seed) {
  QuadraticFit fit;
  fit.where = {t, r, theta};
  int idx[4][4];
  int n = 0;
  for (int e = 0; e < 4; ++e) {
    for (int f = e; f < 4; ++f) idx[e][f] = idx[f][e] = n++;
  }
  const CurvatureProfile cp = curvature_profile(conn, t, r);
  UniformStream rng(seed);
  std::vector<Eigen::Matrix<double, 1, 10>> rows;
  for (std::size_t s = 0; s < velocities; ++s) {
    const TangentPoint p{t, r, theta, 0.0, 0.5 + rng.next(), 2 * rng.next() - 1,
                         2 * rng.next() - 1, 2 * rng.next() - 1};
    const Vec4 v = p.v();
    // V(A) = 2 V^e a_ef xdot^f for each vertical bracket field V.
    for (const BracketVector& bv : bracket_vectors(cp, p, 2)) {
      Eigen::Matrix<double, 1, 10> row = Eigen::Matrix<double, 1, 10>::Zero();
      for (int e = 0; e < 4; ++e) {
        for (int f = 0; f < 4; ++f) row(idx[e][f]) += 2.0 * bv.v[e] * v[f];
      }
      const double norm = row.norm();
      if (norm > 1e-14) rows.push_back(row / norm);
    }
  }
  fit.rows = rows.size();
  if (rows.empty()) {
    fit.null_dim = 10;
    fit.nondegenerate_solution = true;
    return fit;
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), 10);
  for (std::size_t i = 0; i < rows.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = rows[i];
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const int rank_cols = static_cast<int>(sv.size());
  int null_dim = 10 - rank_cols;
  for (int i = 0; i < rank_cols; ++i) {
    if (sv(i) <= 1e-8 * sv(0)) ++null_dim;
  }
  fit.null_dim = null_dim;

  auto as_matrix = [&](const Eigen::Matrix<double, 10, 1>& c) {
    Eigen::Matrix4d a;
    for (int e = 0; e < 4; ++e) {
      for (int f = 0; f < 4; ++f) a(e, f) = c(idx[e][f]);
    }
    return a;
  };
  if (null_dim > 0) {
    const Eigen::MatrixXd N = svd.matrixV().rightCols(null_dim);
    UniformStream mix(seed + 1);
    for (int trial = 0; trial < 64 && !fit.nondegenerate_solution; ++trial) {
      Eigen::VectorXd c(null_dim);
      for (int i = 0; i < null_dim; ++i) c(i) = trial < null_dim ? (i == trial) : 2 * mix.next() - 1;
      const Eigen::Matrix4d a = as_matrix(N * c);
      const double nrm = a.norm();
      if (nrm > 0 && std::fabs(a.determinant()) / std::pow(nrm, 4) > 1e-6) {
        fit.nondegenerate_solution = true;
      }
    }
  }
  if (fit.nondegenerate_solution) {
    fit.residual = 0.0;
  } else {
    const int k = 10 - null_dim - 1;
    fit.residual = k >= 0 && k < rank_cols ? sv(k) / sv(0) : 0.0;
  }
  return fit;
}

QuadraticFit quadratic_fit(const ConnectionProfile& conn,
                           const std::vector<std::array<double, 3>>& points,
                           std::size_t velocities, std::uint64_t seed) {
  QuadraticFit worst;
  bool first = true;
  for (const auto& x : points) {
    const QuadraticFit f = quadratic_fit(conn, x[0], x[1], x[2], velocities, seed);
    if (first || f.residual > worst.residual) worst = f;
    first = false;
  }
  return worst;
}

}  // namespace berwald
