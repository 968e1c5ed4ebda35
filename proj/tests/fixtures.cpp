#include "fixtures.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

#include "berwald/brackets.hpp"
#include "berwald/curvature.hpp"

namespace berwald::fixtures {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", x);
  return buf;
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

}  // namespace

ConnectionProfile example1(double alpha) {
  return ConnectionProfile({{"k1", "2*r*(alpha-2)"},
                            {"k4", "4*alpha*r^3*(alpha-1)"},
                            {"k6", "-2*alpha*r"},
                            {"k8", "-2*r"},
                            {"k10", "alpha*r"}},
                           {{"alpha", alpha}});
}

double example1_L(double alpha, const TangentPoint& p) {
  const double s = std::sin(p.theta);
  const double base = 4 * alpha * p.r * p.r * p.tdot * p.tdot - 4 * p.tdot * p.rdot -
                      alpha * p.thetadot * p.thetadot - alpha * p.phidot * p.phidot * s * s;
  return std::pow(p.tdot, 2.0 / (alpha - 1)) * std::pow(base, (alpha - 2) / (alpha - 1));
}

ConnectionProfile example2() {
  return ConnectionProfile({{"k1", "r"}, {"k5", "t/3"}, {"k9", "t/3"}, {"k10", "t/3"}}, {});
}

double example2_L(const TangentPoint& p) {
  const double w2 = p.w2();
  return std::exp(0.5 * p.t * p.r) * std::sqrt(p.tdot) * std::pow(p.rdot * p.rdot - w2, 0.75);
}

ConnectionProfile exponential() {
  const std::string k1 = "(r - 4*t - r*exp((r-t)^2) + 3*t^3 - 5*r*t^2 + 2*r^2*t)";
  const std::string k2 = "(r*exp((r-t)^2) - 3*t^3 + 5*r*t^2 - 2*r^2*t + 2*t)";
  return ConnectionProfile({{"k1", k1},
                            {"k2", k2},
                            {"k3", "-(" + k1 + " + 2*" + k2 + ")"},
                            {"k4", "2*" + k1 + " + " + k2 + " + 2*t"},
                            {"k5", "-" + k2 + " + 2*t"},
                            {"k6", "-" + k1 + " - 2*t"},
                            {"k7", "t"},
                            {"k8", "-t"},
                            {"k9", "t"},
                            {"k10", "t"}},
                           {});
}

double exponential_mu(double t, double r) { return std::exp(-(r - t) * (r - t)); }

double exponential_phi(double t, double r) {
  return std::exp((3 * t * t - 2 * r * t - 1) * exponential_mu(t, r));
}

double exponential_L(const TangentPoint& p) {
  const double u = p.rdot - p.tdot;
  const double v = 2 * p.rdot * p.rdot - 2 * p.tdot * p.rdot - p.w2();
  return exponential_phi(p.t, p.r) * std::exp(exponential_mu(p.t, p.r) * v / (u * u)) * u * u;
}

ConnectionProfile flat() { return ConnectionProfile(); }

ConnectionProfile class4_k1() { return ConnectionProfile({{"k1", "1"}}, {}); }

ConnectionProfile minkowski_spherical() {
  return ConnectionProfile({{"k9", "1/r"}, {"k10", "-r"}}, {});
}

ConnectionProfile class5(const std::string& k1, const std::string& k5) {
  return ConnectionProfile({{"k1", k1}, {"k5", k5}}, {});
}

ConnectionProfile class5_symmetric() { return class5("2*t*r", "t^2"); }
ConnectionProfile class5_asymmetric() { return class5("4*t*r", "t^2"); }

ConnectionProfile random_polynomial(UniformStream& rng) {
  std::map<std::string, std::string> src;
  for (int i = 1; i <= 10; ++i) {
    auto c = [&] { return num(-1.0 + 2.0 * rng.next()); };
    src["k" + std::to_string(i)] =
        c() + " + " + c() + "*t + " + c() + "*r + " + c() + "*t^2 + " + c() + "*t*r + " + c() +
        "*r^2";
  }
  return ConnectionProfile(src, {});
}

Class3Fixture random_class3(std::uint64_t seed, const Box& box) {
  UniformStream rng(seed);
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.next(); };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // X^0 = t + c0 t^2 + c1 t r + c2 r^2, X^1 = r + c3 t^2 + c4 t r + c5 r^2
    double c[6];
    for (double& x : c) x = uni(-0.15, 0.15);
    // eta = [[e0, e1], [e1, e2]], kept away from degenerate.
    const double e0 = uni(0.5, 1.5) * (rng.next() < 0.5 ? 1 : -1);
    const double e2 = uni(0.5, 1.5) * (rng.next() < 0.5 ? 1 : -1);
    const double e1 = uni(-0.3, 0.3);
    const double edet = e0 * e2 - e1 * e1;
    if (std::fabs(edet) < 0.2) continue;
    // K = q0 + q1 xi + q2 xi^2 with xi = n0 X^0 + n1 X^1.
    const double q0 = uni(-0.5, 0.5);
    const double q1 = uni(0.3, 0.8) * (rng.next() < 0.5 ? 1 : -1);
    const double q2 = uni(-0.05, 0.05);
    const double angle = uni(0.0, 6.283185307179586);
    const double n0 = std::cos(angle), n1 = std::sin(angle);

    const std::string X0t = paren("1 + 2*" + num(c[0]) + "*t + " + num(c[1]) + "*r");
    const std::string X0r = paren(num(c[1]) + "*t + 2*" + num(c[2]) + "*r");
    const std::string X1t = paren("2*" + num(c[3]) + "*t + " + num(c[4]) + "*r");
    const std::string X1r = paren("1 + " + num(c[4]) + "*t + 2*" + num(c[5]) + "*r");
    const std::string det = paren(X0t + "*" + X1r + " - " + X0r + "*" + X1t);
    // J^{-1} = adj(J)/det, rows indexed by (t, r), columns by X index.
    const std::string Ji[2][2] = {{paren(X1r + "/" + det), paren("-" + X0r + "/" + det)},
                                  {paren("-" + X1t + "/" + det), paren(X0t + "/" + det)}};
    const double Xtt[2] = {2 * c[0], 2 * c[3]}, Xtr[2] = {c[1], c[4]}, Xrr[2] = {2 * c[2], 2 * c[5]};
    auto gamma = [&](int a, const double* second) {
      return paren(Ji[a][0] + "*" + num(second[0]) + " + " + Ji[a][1] + "*" + num(second[1]));
    };
    const std::string X0 = paren("t + " + num(c[0]) + "*t^2 + " + num(c[1]) + "*t*r + " +
                                 num(c[2]) + "*r^2");
    const std::string X1 = paren("r + " + num(c[3]) + "*t^2 + " + num(c[4]) + "*t*r + " +
                                 num(c[5]) + "*r^2");
    const std::string xi = paren(num(n0) + "*" + X0 + " + " + num(n1) + "*" + X1);
    const std::string K = num(q0) + " + " + num(q1) + "*" + xi + " + " + num(q2) + "*" + xi + "^2";
    const std::string dK = paren(num(q1) + " + 2*" + num(q2) + "*" + xi);
    const std::string Kt = paren(dK + "*(" + num(n0) + "*" + X0t + " + " + num(n1) + "*" + X1t + ")");
    const std::string Kr = paren(dK + "*(" + num(n0) + "*" + X0r + " + " + num(n1) + "*" + X1r + ")");
    const std::string S = "exp(2*(" + K + "))";
    // eta^{-1}
    const double ei[2][2] = {{e2 / edet, -e1 / edet}, {-e1 / edet, e0 / edet}};
    // h^{-1} = J^{-1} eta^{-1} J^{-T}
    auto hinv = [&](int a, int b) {
      std::string acc;
      for (int A = 0; A < 2; ++A) {
        for (int B = 0; B < 2; ++B) {
          if (!acc.empty()) acc += " + ";
          acc += Ji[a][A] + "*" + num(ei[A][B]) + "*" + Ji[b][B];
        }
      }
      return paren(acc);
    };
    const std::string k7 = paren(S + "*(" + hinv(0, 0) + "*" + Kt + " + " + hinv(0, 1) + "*" + Kr + ")");
    const std::string k10 = paren(S + "*(" + hinv(1, 0) + "*" + Kt + " + " + hinv(1, 1) + "*" + Kr + ")");

    Class3Fixture fx;
    fx.seed = seed;
    fx.K = K;
    fx.conn = ConnectionProfile({{"k1", gamma(0, Xtt)},
                                 {"k2", gamma(0, Xtr)},
                                 {"k3", gamma(0, Xrr)},
                                 {"k4", gamma(1, Xtt)},
                                 {"k5", gamma(1, Xrr)},
                                 {"k6", gamma(1, Xtr)},
                                 {"k7", k7},
                                 {"k8", Kt},
                                 {"k9", Kr},
                                 {"k10", k10}},
                                {});

    // Reject draws with a small Jacobian or a vanishing k10 on the box.
    bool ok = true;
    double k10_min = 1e300, k10_max = 0.0;
    const ScalarField det_f = ScalarField::parse(det);
    for (int i = 0; i <= 30 && ok; ++i) {
      for (int j = 0; j <= 30 && ok; ++j) {
        const double t = box.t0 + (box.t1 - box.t0) * i / 30.0;
        const double r = box.r0 + (box.r1 - box.r0) * j / 30.0;
        if (det_f.value(t, r) < 0.3) ok = false;
        const double k10v = std::fabs(fx.conn.k(10).value(t, r));
        k10_min = std::min(k10_min, k10v);
        k10_max = std::max(k10_max, k10v);
      }
    }
    if (!ok || k10_min < 0.05 * k10_max || k10_min < 1e-3) continue;

    fx.A = [=](const TangentPoint& p) {
      const double t = p.t, r = p.r;
      const double J[2][2] = {{1 + 2 * c[0] * t + c[1] * r, c[1] * t + 2 * c[2] * r},
                              {2 * c[3] * t + c[4] * r, 1 + c[4] * t + 2 * c[5] * r}};
      const double X0 = J[0][0] * p.tdot + J[0][1] * p.rdot;
      const double X1 = J[1][0] * p.tdot + J[1][1] * p.rdot;
      const double x0 = t + c[0] * t * t + c[1] * t * r + c[2] * r * r;
      const double x1 = r + c[3] * t * t + c[4] * t * r + c[5] * r * r;
      const double xv = n0 * x0 + n1 * x1;
      const double Kv = q0 + q1 * xv + q2 * xv * xv;
      return e0 * X0 * X0 + 2 * e1 * X0 * X1 + e2 * X1 * X1 - std::exp(2 * Kv) * p.w2();
    };
    return fx;
  }
  throw std::runtime_error("random_class3: no admissible draw");
}

std::pair<std::string, std::string> search_class5(bool symmetric, const Grid& grid) {
  std::vector<std::string> monomials;
  const char* powers_t[] = {"", "t", "t^2"};
  const char* powers_r[] = {"", "r", "r^2"};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::string m = std::string(powers_t[i]);
      if (j > 0) m += (m.empty() ? "" : "*") + std::string(powers_r[j]);
      monomials.push_back(m.empty() ? "1" : m);
    }
  }
  const TangentPoint probe{0, 0, 1.1, 0.3, 1.0, 0.4, -0.3, 0.7};
  for (int c1 = -2; c1 <= 2; ++c1) {
    if (c1 == 0) continue;
    for (const auto& m1 : monomials) {
      for (int c2 = -2; c2 <= 2; ++c2) {
        if (c2 == 0) continue;
        for (const auto& m2 : monomials) {
          const std::string k1 = std::to_string(c1) + "*" + m1;
          const std::string k5 = std::to_string(c2) + "*" + m2;
          const ConnectionProfile conn = class5(k1, k5);
          bool ok = true;
          for (int i = 0; i < grid.nt && ok; ++i) {
            for (int j = 0; j < grid.nr && ok; ++j) {
              const CurvatureProfile cp = curvature_profile(conn, grid.t(i), grid.r(j));
              const double a1 = cp.ai(1).v, a2 = cp.ai(2).v, a3 = cp.ai(3).v, a4 = cp.ai(4).v;
              if (std::fabs(a1 * a4 - a2 * a3) < 1e-2) ok = false;
              const double sym = std::fabs(a1 + a4);
              if (symmetric ? sym > 1e-12 : sym < 1e-2) ok = false;
              // [delta_t, [delta_t, delta_r]] and [delta_r, [delta_t, delta_r]]
              // must be proportional to [delta_t, delta_r].
              TangentPoint p = probe;
              p.t = grid.t(i);
              p.r = grid.r(j);
              const Vec4 w = bracket(cp, p, kT, kR);
              for (int c : {kT, kR}) {
                const Vec4 u = bracket2(cp, p, c, kT, kR);
                for (int x = 0; x < 4; ++x) {
                  for (int y = x + 1; y < 4; ++y) {
                    if (std::fabs(u[x] * w[y] - u[y] * w[x]) > 1e-10) ok = false;
                  }
                }
              }
            }
          }
          if (ok) return {k1, k5};
        }
      }
    }
  }
  throw std::runtime_error("search_class5: no fixture found");
}

}  // namespace berwald::fixtures
