#include "berwald/metrizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "berwald/curvature.hpp"
#include "berwald/ode.hpp"

namespace berwald {

namespace {

constexpr double kDomainEps = 1e-6;
constexpr double kNodeZero = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

Jet8 lift8(const Jet2& j) { return lift<8>(j, kSlotT, kSlotR); }

Jet8 w2_jet(const std::array<Jet8, 8>& x) {
  const Jet8 s = sin(x[kSlotTheta]);
  return x[kSlotThetadot] * x[kSlotThetadot] + s * s * x[kSlotPhidot] * x[kSlotPhidot];
}

struct Abc {
  Jet2 a, b, c;
};

Abc abc_from(const std::array<Jet2, 12>& k) {
  const Jet2 &k7 = k[6], &k8 = k[7], &k9 = k[8], &k10 = k[9];
  if (k10.v == 0.0) throw DomainError("k10 vanishes; a, b, c undefined");
  return {k7 / k10, k8 / k10, (k9 * k10 - k7 * k8) / (k10 * k10)};
}

struct Abcd {
  double a, b, c;
};

Abcd abc_values(const std::array<double, 12>& k) {
  const double k7 = k[6], k8 = k[7], k9 = k[8], k10 = k[9];
  if (k10 == 0.0) throw DomainError("k10 vanishes; a, b, c undefined");
  return {k7 / k10, k8 / k10, (k9 * k10 - k7 * k8) / (k10 * k10)};
}

// u = tdot - a rdot, v = c rdot^2 + 2 b tdot rdot - w^2.
struct UV {
  Jet8 u, v;
};

UV uv_jets(const Abc& abc, const std::array<Jet8, 8>& x) {
  const Jet8 a = lift8(abc.a), b = lift8(abc.b), c = lift8(abc.c);
  const Jet8& td = x[kSlotTdot];
  const Jet8& rd = x[kSlotRdot];
  return {td - a * rd, c * rd * rd + 2.0 * b * td * rd - w2_jet(x)};
}

std::array<double, 2> uv_values(const Abcd& abc, const TangentPoint& p) {
  return {p.tdot - abc.a * p.rdot,
          abc.c * p.rdot * p.rdot + 2.0 * abc.b * p.tdot * p.rdot - p.w2()};
}

CurvatureProfile profile_at(const ConnectionProfile& conn, double t, double r) {
  return curvature_profile(conn.jets(t, r), t, r, 0.0);
}

void certify(const Potential& pot, double tol, std::vector<Residual>* certs, bool gradient) {
  const Residual closed = pot.closedness(tol);
  const Residual path = pot.path_independence(tol);
  if (certs) {
    certs->push_back(closed);
    certs->push_back(path);
  }
  for (const Residual* r : {&closed, &path}) {
    if (r->pass()) continue;
    const std::string msg =
        r->name + " residual " + fmt(r->value) + " exceeds " + fmt(r->tolerance);
    if (gradient) throw GradientNotClosed(msg);
    throw NotClosed(msg);
  }
}

}  // namespace

std::array<Jet8, 8> jet_coordinates(const TangentPoint& p) {
  const double v[8] = {p.t, p.r, p.theta, p.phi, p.tdot, p.rdot, p.thetadot, p.phidot};
  std::array<Jet8, 8> x;
  for (int i = 0; i < 8; ++i) x[static_cast<std::size_t>(i)] = Jet8::variable(v[i], i);
  return x;
}

// --- RiemannForm ------------------------------------------------------------

Vec4 RiemannForm::reference_velocity(double, double) const { return {1.0, 0.3, 0.2, 0.1}; }

Eigen::Matrix4d RiemannForm::coefficients(double t, double r, double theta) const {
  const Vec4 y = reference_velocity(t, r);
  const Jet8 L = evaluate(TangentPoint::from({t, r, theta, 0.0}, y));
  Eigen::Matrix4d g;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) g(a, b) = 0.5 * L.dd(4 + a, 4 + b);
  }
  return g;
}

MetricJet RiemannForm::metric_jet(double t, double r, double theta) const {
  const Vec4 ref = reference_velocity(t, r);
  const Vec4 x = {t, r, theta, 0.0};
  const int side = branch(TangentPoint::from(x, ref));
  // Rows y_k = ref + delta_k e_k; d_c (dA/dydot_b)(y_k) = 2 (d_c a)_be y_k^e.
  Eigen::Matrix4d Y;
  std::array<Jet8, 4> vals;
  for (int k = 0; k < 4; ++k) {
    bool found = false;
    for (double delta : {0.25, -0.25, 0.5, -0.5, 0.75}) {
      Vec4 y = ref;
      y[static_cast<std::size_t>(k)] += delta;
      const TangentPoint p = TangentPoint::from(x, y);
      if (!in_domain(p) || branch(p) != side) continue;
      for (int e = 0; e < 4; ++e) Y(k, e) = y[static_cast<std::size_t>(e)];
      vals[static_cast<std::size_t>(k)] = evaluate(p);
      found = true;
      break;
    }
    if (!found) throw Degenerate("no admissible probe velocities for the metric jet");
  }
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(Y);
  if (!lu.isInvertible()) throw Degenerate("probe velocities are linearly dependent");

  MetricJet out;
  out.g = coefficients(t, r, theta);
  for (int c = 0; c < 4; ++c) {
    Eigen::Matrix4d M;
    for (int k = 0; k < 4; ++k) {
      for (int b = 0; b < 4; ++b) M(k, b) = vals[static_cast<std::size_t>(k)].dd(c, 4 + b);
    }
    Eigen::Matrix4d dg = 0.5 * lu.solve(M);
    out.dg[static_cast<std::size_t>(c)] = 0.5 * (dg + dg.transpose());
  }
  return out;
}

// --- ExpressionFinsler --------------------------------------------------------

ExpressionFinsler::ExpressionFinsler(const std::string& source, const ParamMap& params)
    : source_(source),
      program_(parse(source),
               {"t", "r", "theta", "phi", "tdot", "rdot", "thetadot", "phidot"}, params) {}

Jet8 ExpressionFinsler::evaluate(const TangentPoint& p) const {
  const auto x = jet_coordinates(p);
  return program_.evaluate(x.data());
}

bool ExpressionFinsler::in_domain(const TangentPoint& p) const {
  if (!p.valid()) return false;
  try {
    bool kink = false;
    const auto x = jet_coordinates(p);
    const Jet8 L = program_.evaluate(x.data(), &kink);
    return !kink && std::isfinite(L.v);
  } catch (const DomainError&) {
    return false;
  }
}

// --- Class 1 -------------------------------------------------------------------

JetForm power_law_form(const ConnectionProfile& conn, double lambda) {
  return [conn, lambda](double t, double r) -> std::array<Jet2, 2> {
    const auto k = conn.jets(t, r);
    const Jet2 a = abc_from(k).a;
    const Jet2 G = 2.0 * (k[0] - k[3] * a), H = 2.0 * (k[1] - k[5] * a);
    const Jet2 Gt = G - 2.0 * k[7], Ht = H - 2.0 * k[8];
    return {G - lambda * Gt, H - lambda * Ht};
  };
}

double power_law_lambda(const ConnectionProfile& conn, const Grid& grid, double tol) {
  std::vector<double> lambdas;
  lambdas.reserve(grid.size());
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nr; ++j) {
      const auto cp = profile_at(conn, grid.t(i), grid.r(j));
      if (cp.corner != WCorner::kNonZero) throw LambdaNotConstant("w-corner vanishes on the grid");
      const double scale = 1.0 + cp.max_abs_a();
      if (std::fabs(cp.D.v) <= kNodeZero * scale) {
        throw LambdaNotConstant("D vanishes at (" + fmt(grid.t(i)) + ", " + fmt(grid.r(j)) + ")");
      }
      lambdas.push_back(cp.F.v / cp.D.v);
    }
  }
  const double lambda =
      std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / static_cast<double>(lambdas.size());
  double spread = 0.0;
  for (double l : lambdas) spread = std::max(spread, std::fabs(l - lambda));
  if (!(spread <= tol * (1.0 + std::fabs(lambda)))) {
    throw LambdaNotConstant("F/D varies by " + fmt(spread) + " on the grid");
  }
  if (std::fabs(lambda - 1.0) <= tol) throw LambdaEqualsOne("lambda = F/D equals 1");
  return lambda;
}

PowerLawFinsler::PowerLawFinsler(ConnectionProfile conn, double lambda, Potential psi)
    : conn_(std::move(conn)), lambda_(lambda), psi_(std::move(psi)) {}

Jet2 PowerLawFinsler::rho(double t, double r) const {
  const auto cp = profile_at(conn_, t, r);
  return cp.E / cp.D;
}

Jet8 PowerLawFinsler::evaluate(const TangentPoint& p) const {
  const auto cp = profile_at(conn_, p.t, p.r);
  const auto x = jet_coordinates(p);
  const UV uv = uv_jets({cp.abc_a, cp.abc_b, cp.abc_c}, x);
  const Jet8 rho = lift8(cp.E / cp.D);
  const Jet8 base = uv.v + rho * uv.u * uv.u;
  return exp(lift8(psi_.jet(p.t, p.r))) * cpow(uv.u, 2.0 - 2.0 * lambda_) * cpow(base, lambda_);
}

bool PowerLawFinsler::in_domain(const TangentPoint& p) const {
  if (!p.valid()) return false;
  const auto cp = profile_at(conn_, p.t, p.r);
  if (cp.corner != WCorner::kNonZero || cp.D.v == 0.0) return false;
  const auto uv = uv_values({cp.abc_a.v, cp.abc_b.v, cp.abc_c.v}, p);
  const double rho = cp.E.v / cp.D.v;
  return uv[0] > kDomainEps && uv[1] + rho * uv[0] * uv[0] > kDomainEps;
}

std::string PowerLawFinsler::formula() const {
  return "e^psi * u^(2-2*lambda) * (v + rho*u^2)^lambda, lambda = " + fmt(lambda_) +
         ", rho = E/D";
}

std::shared_ptr<PowerLawFinsler> build_power_law(const ConnectionProfile& conn, const Grid& grid,
                                                 const MetrizeOptions& opt,
                                                 std::vector<Residual>* certs) {
  const double lambda = power_law_lambda(conn, grid, opt.lambda_tol);
  Potential psi(power_law_form(conn, lambda), grid, "psi");
  certify(psi, opt.closedness_tol, certs, false);
  return std::make_shared<PowerLawFinsler>(conn, lambda, std::move(psi));
}

// --- Class 2 -------------------------------------------------------------------

JetForm exponential_form(const ConnectionProfile& conn) {
  return [conn](double t, double r) -> std::array<Jet2, 2> {
    const auto cp = profile_at(conn, t, r);
    if (cp.E.v == 0.0) throw DomainError("E vanishes; mu undefined");
    const Jet2 mu = cp.F / cp.E;
    const Jet2 f = 2.0 * cp.abc_b * mu;
    return {cp.G + cp.ki(4) * f, cp.H + cp.ki(6) * f};
  };
}

ExponentialFinsler::ExponentialFinsler(ConnectionProfile conn, Potential psi)
    : conn_(std::move(conn)), psi_(std::move(psi)) {}

Jet2 ExponentialFinsler::mu(double t, double r) const {
  const auto cp = profile_at(conn_, t, r);
  return cp.F / cp.E;
}

Jet8 ExponentialFinsler::evaluate(const TangentPoint& p) const {
  const auto cp = profile_at(conn_, p.t, p.r);
  const auto x = jet_coordinates(p);
  const UV uv = uv_jets({cp.abc_a, cp.abc_b, cp.abc_c}, x);
  const Jet8 mu = lift8(cp.F / cp.E);
  const Jet8 u2 = uv.u * uv.u;
  return exp(lift8(psi_.jet(p.t, p.r))) * u2 * exp(mu * uv.v / u2);
}

bool ExponentialFinsler::in_domain(const TangentPoint& p) const {
  if (!p.valid()) return false;
  const auto k = conn_.values(p.t, p.r);
  if (k[9] == 0.0) return false;
  return std::fabs(uv_values(abc_values(k), p)[0]) > kDomainEps;
}

std::string ExponentialFinsler::formula() const {
  return "e^psi * u^2 * exp(mu*v/u^2), mu = F/E";
}

std::shared_ptr<ExponentialFinsler> build_exponential(const ConnectionProfile& conn,
                                                      const Grid& grid,
                                                      const MetrizeOptions& opt,
                                                      std::vector<Residual>* certs) {
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nr; ++j) {
      const auto cp = profile_at(conn, grid.t(i), grid.r(j));
      if (cp.corner != WCorner::kNonZero) throw NotMetrizable("w-corner vanishes on the grid");
      if (std::fabs(cp.E.v) <= kNodeZero * (1.0 + cp.max_abs_a())) {
        throw NotMetrizable("E vanishes at (" + fmt(grid.t(i)) + ", " + fmt(grid.r(j)) + ")");
      }
    }
  }
  Potential psi(exponential_form(conn), grid, "psi");
  certify(psi, opt.closedness_tol, certs, false);
  return std::make_shared<ExponentialFinsler>(conn, std::move(psi));
}

// --- Theta ---------------------------------------------------------------------

Theta Theta::square() {
  Theta th;
  th.kind_ = Kind::kSquare;
  return th;
}

Theta Theta::expression(const std::string& source, const ParamMap& params) {
  Theta th;
  th.kind_ = Kind::kExpression;
  th.source_ = source;
  th.program_ = Program(parse(source), {"s"}, params);
  return th;
}

std::string Theta::describe() const {
  switch (kind_) {
    case Kind::kIdentity:
      return "identity";
    case Kind::kSquare:
      return "square";
    case Kind::kExpression:
      break;
  }
  return source_;
}

Jet8 Theta::operator()(const Jet8& s) const {
  switch (kind_) {
    case Kind::kIdentity:
      return s;
    case Kind::kSquare:
      return s * s;
    case Kind::kExpression:
      break;
  }
  return program_.evaluate(&s);
}

// --- Class 3 -------------------------------------------------------------------

double Class3Potentials::delta(double t, double r) const {
  const auto abc = abc_values(conn.values(t, r));
  const double M_ = M.value(t, r) + M_shift;
  return M_ * std::exp(G.value(t, r)) * (2.0 * abc.a * abc.b + abc.c) -
         abc.b * abc.b * std::exp(2.0 * K.value(t, r));
}

std::shared_ptr<const Class3Potentials> build_class3_potentials(const ConnectionProfile& conn,
                                                                const Grid& grid,
                                                                const MetrizeOptions& opt,
                                                                std::vector<Residual>* certs) {
  auto pot = std::make_shared<Class3Potentials>();
  pot->conn = conn;
  pot->G = Potential(
      JetForm([conn](double t, double r) -> std::array<Jet2, 2> {
        const auto k = conn.jets(t, r);
        const Jet2 a = abc_from(k).a;
        return {2.0 * (k[0] - k[3] * a), 2.0 * (k[1] - k[5] * a)};
      }),
      grid, "G");
  certify(pot->G, opt.closedness_tol, certs, false);
  pot->K = Potential(
      JetForm([conn](double t, double r) -> std::array<Jet2, 2> {
        const auto k = conn.jets(t, r);
        return {k[7], k[8]};
      }),
      grid, "K");
  certify(pot->K, opt.closedness_tol, certs, false);
  const Potential G = pot->G, K = pot->K;
  pot->M = Potential(
      JetForm([conn, G, K](double t, double r) -> std::array<Jet2, 2> {
        const auto k = conn.jets(t, r);
        const Jet2 b = abc_from(k).b;
        const Jet2 f = 2.0 * exp(-(G.jet(t, r) - 2.0 * K.jet(t, r))) * b;
        return {f * k[3], f * k[5]};
      }),
      grid, "M");
  certify(pot->M, opt.closedness_tol, certs, false);

  // Delta is affine in the shift C: Delta_i(C) = p_i (M_i + C) - q_i.
  std::vector<double> p, q, m;
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nr; ++j) {
      const double t = grid.t(i), r = grid.r(j);
      const auto abc = abc_values(conn.values(t, r));
      p.push_back(std::exp(pot->G.node(i, j)) * (2.0 * abc.a * abc.b + abc.c));
      q.push_back(abc.b * abc.b * std::exp(2.0 * pot->K.node(i, j)));
      m.push_back(pot->M.node(i, j));
    }
  }
  auto worst = [&](double C) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < p.size(); ++n) lo = std::min(lo, std::fabs(p[n] * (m[n] + C) - q[n]));
    return lo;
  };
  auto sign_changes = [&](double C) {
    bool pos = false, neg = false;
    for (std::size_t n = 0; n < p.size(); ++n) {
      const double d = p[n] * (m[n] + C) - q[n];
      pos = pos || d > 0.0;
      neg = neg || d < 0.0;
    }
    return pos && neg;
  };
  double C = 0.0;
  if (sign_changes(0.0) || worst(0.0) <= kNodeZero) {
    std::vector<double> roots;
    for (std::size_t n = 0; n < p.size(); ++n) {
      if (p[n] != 0.0) roots.push_back(q[n] / p[n] - m[n]);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> cand;
    if (!roots.empty()) {
      const double s = std::max(1.0, roots.back() - roots.front());
      cand.push_back(roots.back() + s);
      for (std::size_t n = 0; n + 1 < roots.size(); ++n) {
        cand.push_back(0.5 * (roots[n] + roots[n + 1]));
      }
      cand.push_back(roots.front() - s);
    }
    double best = worst(0.0);
    for (double c : cand) {
      if (sign_changes(c)) continue;
      const double w = worst(c);
      if (w > best) {
        best = w;
        C = c;
      }
    }
    if (!(best > kNodeZero)) throw DeltaVanishes("no constant shift of M clears Delta on the grid");
  }
  pot->M_shift = C;
  return pot;
}

Class3Finsler::Class3Finsler(std::shared_ptr<const Class3Potentials> pot, Theta theta)
    : pot_(std::move(pot)), theta_(std::move(theta)) {}

Jet8 Class3Finsler::evaluate(const TangentPoint& p) const {
  const auto x = jet_coordinates(p);
  const UV uv = uv_jets(abc_from(pot_->conn.jets(p.t, p.r)), x);
  const Jet8 G = lift8(pot_->G.jet(p.t, p.r));
  const Jet8 K = lift8(pot_->K.jet(p.t, p.r));
  const Jet8 M = lift8(pot_->M.jet(p.t, p.r)) + pot_->M_shift;
  const Jet8 u2 = uv.u * uv.u;
  const Jet8 s = uv.v / u2 * exp(-(G - 2.0 * K)) + M;
  return exp(G) * u2 * theta_(s);
}

bool Class3Finsler::in_domain(const TangentPoint& p) const {
  if (!p.valid()) return false;
  const auto k = pot_->conn.values(p.t, p.r);
  if (k[9] == 0.0) return false;
  if (std::fabs(uv_values(abc_values(k), p)[0]) <= kDomainEps) return false;
  try {
    return std::isfinite(evaluate(p).v);
  } catch (const DomainError&) {
    return false;
  }
}

std::string Class3Finsler::formula() const {
  return "e^G * u^2 * Theta(v/u^2 * e^(2K-G) + M), Theta = " + theta_.describe() +
         ", M shift = " + fmt(pot_->M_shift);
}

Jet8 Class3Metric::evaluate(const TangentPoint& p) const {
  const auto x = jet_coordinates(p);
  const UV uv = uv_jets(abc_from(pot_->conn.jets(p.t, p.r)), x);
  const Jet8 G = lift8(pot_->G.jet(p.t, p.r));
  const Jet8 K = lift8(pot_->K.jet(p.t, p.r));
  const Jet8 M = lift8(pot_->M.jet(p.t, p.r)) + pot_->M_shift;
  return uv.v * exp(2.0 * K) + exp(G) * M * uv.u * uv.u;
}

std::string Class3Metric::formula() const {
  return "v * e^(2K) + e^G * M * u^2, M shift = " + fmt(pot_->M_shift);
}

// --- Class 4 -------------------------------------------------------------------

TransportedMetric::TransportedMetric(ConnectionProfile conn, const Grid& grid,
                                     std::array<double, 3> h0)
    : conn_(std::move(conn)), grid_(grid), nodes_(grid.size()) {
  auto at = [&](int i, int j) -> std::array<double, 3>& {
    return nodes_[static_cast<std::size_t>(i * grid_.nr + j)];
  };
  at(0, 0) = h0;
  for (int i = 1; i < grid_.nt; ++i) {
    at(i, 0) = advance(at(i - 1, 0), grid_.t(i - 1), grid_.r(0), grid_.t(i), grid_.r(0), true);
  }
  for (int i = 0; i < grid_.nt; ++i) {
    for (int j = 1; j < grid_.nr; ++j) {
      at(i, j) = advance(at(i, j - 1), grid_.t(i), grid_.r(j - 1), grid_.t(i), grid_.r(j), true);
    }
  }
}

std::array<double, 3> TransportedMetric::derivative(const std::array<double, 3>& h, double t,
                                                    double r, int axis) const {
  const Christoffel gam = christoffel(conn_.values(t, r), M_PI / 2);
  const double H[2][2] = {{h[0], h[1]}, {h[1], h[2]}};
  auto dh = [&](int b, int c) {
    double s = 0.0;
    for (int d = 0; d < 2; ++d) s += gam[d][axis][b] * H[d][c] + gam[d][axis][c] * H[b][d];
    return s;
  };
  return {dh(0, 0), dh(0, 1), dh(1, 1)};
}

std::array<double, 3> TransportedMetric::advance(std::array<double, 3> h, double t0, double r0,
                                                 double t1, double r1, bool t_first) const {
  OdeOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-13;
  auto leg = [&](int axis, double fixed, double s0, double s1) {
    if (s0 == s1) return;
    Dopri5 ode(
        [&](double s, const State& y, State& dy) {
          const double t = axis == 0 ? s : fixed, r = axis == 0 ? fixed : s;
          const auto d = derivative({y[0], y[1], y[2]}, t, r, axis);
          dy.assign(d.begin(), d.end());
        },
        opt);
    const State y = ode.integrate(s0, State(h.begin(), h.end()), s1);
    h = {y[0], y[1], y[2]};
  };
  if (t_first) {
    leg(0, r0, t0, t1);
    leg(1, t1, r0, r1);
  } else {
    leg(1, t0, r0, r1);
    leg(0, r1, t0, t1);
  }
  return h;
}

std::array<double, 3> TransportedMetric::value(double t, double r) const {
  auto nearest = [](double x, double lo, double hi, int n) {
    if (n <= 1) return 0;
    const double u = (x - lo) / (hi - lo) * (n - 1);
    return static_cast<int>(std::clamp(std::lround(u), 0L, static_cast<long>(n - 1)));
  };
  const int i = nearest(t, grid_.box.t0, grid_.box.t1, grid_.nt);
  const int j = nearest(r, grid_.box.r0, grid_.box.r1, grid_.nr);
  return advance(nodes_[static_cast<std::size_t>(i * grid_.nr + j)], grid_.t(i), grid_.r(j), t, r,
                 true);
}

std::array<Jet2, 3> TransportedMetric::jets(double t, double r) const {
  const auto h = value(t, r);
  const auto ht = derivative(h, t, r, 0), hr = derivative(h, t, r, 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::array<Jet2, 3> out;
  for (std::size_t n = 0; n < 3; ++n) out[n] = make_jet2(h[n], ht[n], hr[n], nan, nan, nan);
  return out;
}

Residual TransportedMetric::path_independence(double tol) const {
  Residual res;
  res.name = "h.path_independence";
  res.tolerance = tol;
  const std::array<double, 3>& h0 = nodes_[0];
  auto check = [&](int i, int j) {
    const double t = grid_.t(i), r = grid_.r(j);
    const auto a = nodes_[static_cast<std::size_t>(i * grid_.nr + j)];
    const auto b = advance(h0, grid_.t(0), grid_.r(0), t, r, false);
    double worst = 0.0;
    for (std::size_t n = 0; n < 3; ++n) {
      worst = std::max(worst, std::fabs(a[n] - b[n]) / (1.0 + std::fabs(a[n])));
    }
    res.update(worst, {t, r});
  };
  const int n = std::min(grid_.nt, grid_.nr);
  for (int d = 1; d < n; ++d) check(d, d);
  check(grid_.nt - 1, 0);
  check(0, grid_.nr - 1);
  check(grid_.nt - 1, grid_.nr - 1);
  check(grid_.nt / 2, grid_.nr / 2);
  return res;
}

Jet8 Class4Metric::evaluate(const TangentPoint& p) const {
  const auto x = jet_coordinates(p);
  const auto h = h_->jets(p.t, p.r);
  const Jet8& td = x[kSlotTdot];
  const Jet8& rd = x[kSlotRdot];
  const Jet8 tr = lift8(h[0]) * td * td + 2.0 * lift8(h[1]) * td * rd + lift8(h[2]) * rd * rd;
  const Jet8 w2 = w2_jet(x);
  return sig_ == Signature::kLorentzian ? tr - w2 : tr + w2;
}

std::string Class4Metric::formula() const {
  return std::string("h_tt*tdot^2 + 2*h_tr*tdot*rdot + h_rr*rdot^2 ") +
         (sig_ == Signature::kLorentzian ? "- w^2" : "+ w^2");
}

std::shared_ptr<Class4Metric> build_class4(const ConnectionProfile& conn, const Grid& grid,
                                           const MetrizeOptions& opt,
                                           std::vector<Residual>* certs) {
  const std::array<double, 3> h0 =
      opt.signature == Signature::kLorentzian ? std::array<double, 3>{1.0, 0.0, -1.0}
                                              : std::array<double, 3>{1.0, 0.0, 1.0};
  auto h = std::make_shared<TransportedMetric>(conn, grid, h0);
  const Residual res = h->path_independence(opt.closedness_tol);
  if (certs) certs->push_back(res);
  if (!res.pass()) {
    throw PathDependent("transported h differs by " + fmt(res.value) + " between path orders");
  }
  return std::make_shared<Class4Metric>(h, opt.signature);
}

// --- Class 5 -------------------------------------------------------------------

namespace {

// Q = -a3 tdot^2 + 2 a1 tdot rdot + a2 rdot^2 as a jet in (t, r).
Jet2 quadratic_q(const CurvatureProfile& cp, double td, double rd) {
  return -1.0 * cp.ai(3) * (td * td) + 2.0 * cp.ai(1) * (td * rd) + cp.ai(2) * (rd * rd);
}

}  // namespace

OneForm class5_phi_form(const ConnectionProfile& conn) {
  return [conn](double t, double r) -> std::array<double, 2> {
    const auto cp = profile_at(conn, t, r);
    const double scale = 1.0 + cp.max_abs_a();
    const double probes[4][2] = {{1.0, 0.0}, {1.0, 0.5}, {1.0, -0.5}, {1.0, 1.0}};
    for (const auto& y : probes) {
      const Jet2 Q = quadratic_q(cp, y[0], y[1]);
      if (std::fabs(Q.v) <= kNodeZero * scale) continue;
      // Vertical derivatives of Q.
      const double dQ[2] = {-2.0 * cp.ai(3).v * y[0] + 2.0 * cp.ai(1).v * y[1],
                            2.0 * cp.ai(1).v * y[0] + 2.0 * cp.ai(2).v * y[1]};
      const Christoffel gam = christoffel(conn.values(t, r), M_PI / 2);
      std::array<double, 2> out{};
      for (int c = 0; c < 2; ++c) {
        double deltaQ = Q.g[static_cast<std::size_t>(c)];
        for (int d = 0; d < 2; ++d) {
          const double N = gam[d][c][0] * y[0] + gam[d][c][1] * y[1];
          deltaQ -= N * dQ[d];
        }
        out[static_cast<std::size_t>(c)] = deltaQ / (2.0 * Q.v);
      }
      return out;
    }
    throw SingularQuadratic("Q vanishes at every probe velocity");
  };
}

Class5Metric::Class5Metric(ConnectionProfile conn, Potential phi, double c1, double c2)
    : conn_(std::move(conn)), phi_(std::move(phi)), c1_(c1), c2_(c2) {}

Jet8 Class5Metric::evaluate(const TangentPoint& p) const {
  const auto cp = profile_at(conn_, p.t, p.r);
  const auto x = jet_coordinates(p);
  const Jet8& td = x[kSlotTdot];
  const Jet8& rd = x[kSlotRdot];
  const Jet8 Q = -1.0 * lift8(cp.ai(3)) * td * td + 2.0 * lift8(cp.ai(1)) * td * rd +
                 lift8(cp.ai(2)) * rd * rd;
  return c1_ * exp(-2.0 * lift8(phi_.jet(p.t, p.r))) * abs(Q) + c2_ * w2_jet(x);
}

bool Class5Metric::in_domain(const TangentPoint& p) const {
  if (!p.valid()) return false;
  const auto cp = profile_at(conn_, p.t, p.r);
  const double Q = quadratic_q(cp, p.tdot, p.rdot).v;
  return std::fabs(Q) > kDomainEps * (1.0 + cp.max_abs_a());
}

int Class5Metric::branch(const TangentPoint& p) const {
  const auto cp = profile_at(conn_, p.t, p.r);
  return quadratic_q(cp, p.tdot, p.rdot).v >= 0.0 ? 1 : -1;
}

Vec4 Class5Metric::reference_velocity(double t, double r) const {
  const Vec4 probes[4] = {{1.0, 0.3, 0.2, 0.1}, {1.0, -0.3, 0.2, 0.1}, {1.0, 0.8, 0.2, 0.1},
                          {0.3, 1.0, 0.2, 0.1}};
  const auto cp = profile_at(conn_, t, r);
  const double scale = 1.0 + cp.max_abs_a();
  for (const Vec4& y : probes) {
    if (std::fabs(quadratic_q(cp, y[0], y[1]).v) > 1e-3 * scale) return y;
  }
  return probes[0];
}

std::string Class5Metric::formula() const {
  return "C1 * e^(-2 phi) * |-a3*tdot^2 + 2*a1*tdot*rdot + a2*rdot^2| + C2 * w^2, C1 = " +
         fmt(c1_) + ", C2 = " + fmt(c2_);
}

std::shared_ptr<Class5Metric> build_class5(const ConnectionProfile& conn, const Grid& grid,
                                           const MetrizeOptions& opt,
                                           std::vector<Residual>* certs) {
  if (opt.C1 == 0.0 || opt.C2 == 0.0) throw ConfigError("C1 and C2 must be nonzero");
  for (int i = 0; i < grid.nt; ++i) {
    for (int j = 0; j < grid.nr; ++j) {
      const double t = grid.t(i), r = grid.r(j);
      const auto cp = profile_at(conn, t, r);
      const double scale = 1.0 + cp.max_abs_a();
      const std::string at = " at (" + fmt(t) + ", " + fmt(r) + ")";
      if (std::fabs(cp.ai(1).v + cp.ai(4).v) > kNodeZero * scale) {
        throw NotRiemannMetrizable("a1 + a4 = " + fmt(cp.ai(1).v + cp.ai(4).v) + at);
      }
      const double det = cp.ai(1).v * cp.ai(4).v - cp.ai(2).v * cp.ai(3).v;
      if (std::fabs(det) <= kNodeZero * scale * scale) {
        throw SingularQuadratic("a1 a4 - a2 a3 vanishes" + at);
      }
    }
  }
  Potential phi(class5_phi_form(conn), grid, "phi");
  certify(phi, opt.closedness_tol, certs, true);
  return std::make_shared<Class5Metric>(conn, std::move(phi), opt.C1, opt.C2);
}

// --- Dispatcher ----------------------------------------------------------------

Metrization metrize(const ConnectionProfile& conn, const Grid& grid, int class_label,
                    const MetrizeOptions& opt) {
  Metrization out;
  out.class_label = class_label;
  switch (class_label) {
    case 1: {
      auto L = build_power_law(conn, grid, opt, &out.certificates);
      out.constants["lambda"] = L->lambda();
      out.potentials.push_back(L->log_scale());
      out.finsler = L;
      break;
    }
    case 2: {
      auto L = build_exponential(conn, grid, opt, &out.certificates);
      out.potentials.push_back(L->log_scale());
      out.finsler = L;
      break;
    }
    case 3: {
      auto pot = build_class3_potentials(conn, grid, opt, &out.certificates);
      out.constants["M_shift"] = pot->M_shift;
      out.potentials = {pot->G, pot->K, pot->M};
      out.finsler = std::make_shared<Class3Finsler>(pot, opt.theta);
      out.riemann = std::make_shared<Class3Metric>(pot);
      break;
    }
    case 4: {
      out.riemann = build_class4(conn, grid, opt, &out.certificates);
      break;
    }
    case 5: {
      auto A = build_class5(conn, grid, opt, &out.certificates);
      out.constants["C1"] = opt.C1;
      out.constants["C2"] = opt.C2;
      out.potentials.push_back(A->phi());
      out.riemann = A;
      break;
    }
    default:
      throw NotMetrizable("no construction for class " + std::to_string(class_label));
  }
  return out;
}

}  // namespace berwald
