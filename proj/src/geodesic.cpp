#include "berwald/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "berwald/errors.hpp"

namespace berwald {

namespace {

State to_state(const TangentPoint& p) {
  return {p.t, p.r, p.theta, p.phi, p.tdot, p.rdot, p.thetadot, p.phidot};
}

TangentPoint to_point(const State& y) {
  return {y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]};
}

std::string describe(const TangentPoint& p) {
  std::ostringstream os;
  os.precision(10);
  os << "(t, r, theta, phi) = (" << p.t << ", " << p.r << ", " << p.theta << ", " << p.phi
     << "), xdot = (" << p.tdot << ", " << p.rdot << ", " << p.thetadot << ", " << p.phidot
     << ")";
  return os.str();
}

}  // namespace

bool in_chart(const TangentPoint& p, const GeodesicOptions& opt) {
  return std::isfinite(p.t) && std::isfinite(p.r) && p.r >= opt.r_min &&
         std::fabs(std::sin(p.theta)) >= opt.sin_min;
}

void Trajectory::require_complete() const {
  if (chart_exit) throw ChartExit(exit_reason + "; last good state " + describe(last_good));
}

void Trajectory::write(std::ostream& os) const {
  os << "s t r theta phi tdot rdot thetadot phidot\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const TangentPoint& p = states[k];
    os << s[k] << ' ' << p.t << ' ' << p.r << ' ' << p.theta << ' ' << p.phi << ' ' << p.tdot
       << ' ' << p.rdot << ' ' << p.thetadot << ' ' << p.phidot << '\n';
  }
}

Trajectory integrate(const SprayField& spray, const TangentPoint& p0, double T, int n_out,
                     const GeodesicOptions& opt) {
  if (!(T > 0.0)) throw DomainError("integration length must be positive");
  if (n_out < 2) throw DomainError("n_out must be at least 2");
  if (!p0.valid() || !in_chart(p0, opt)) throw ChartExit("initial state outside the chart");

  OdeOptions ode_opt;
  ode_opt.rtol = opt.rtol;
  ode_opt.atol = opt.atol;
  ode_opt.max_steps = opt.max_steps;
  Dopri5 ode(
      [&spray](double, const State& y, State& dy) {
        const TangentPoint p = to_point(y);
        const Vec4 G = spray(p);
        dy.resize(8);
        for (int a = 0; a < 4; ++a) {
          dy[static_cast<std::size_t>(a)] = y[static_cast<std::size_t>(4 + a)];
          dy[static_cast<std::size_t>(4 + a)] = -2.0 * G[static_cast<std::size_t>(a)];
        }
      },
      ode_opt);

  Trajectory out;
  out.last_good = p0;
  out.s.push_back(0.0);
  out.states.push_back(p0);
  int next = 1;
  auto target = [&](int k) { return T * static_cast<double>(k) / (n_out - 1); };
  ode.integrate(0.0, to_state(p0), T, [&](const DenseStep& step) {
    const TangentPoint end = to_point(step.y1);
    if (!in_chart(end, opt)) {
      out.chart_exit = true;
      out.exit_reason = "chart exit near s = " + std::to_string(step.s1);
      return false;
    }
    out.last_good = end;
    while (next < n_out && target(next) <= step.s1) {
      const double s = next == n_out - 1 ? step.s1 : target(next);
      out.s.push_back(target(next));
      out.states.push_back(to_point(next == n_out - 1 ? step.y1 : step.at(s)));
      ++next;
    }
    return true;
  });
  out.stats = ode.stats();
  return out;
}

Trajectory integrate_spray(const ConnectionProfile& conn, const TangentPoint& p0, double T,
                           int n_out, const GeodesicOptions& opt) {
  return integrate([&conn](const TangentPoint& p) { return spray_coefficients(conn, p); }, p0, T,
                   n_out, opt);
}

double sup_discrepancy(const Trajectory& a, const Trajectory& b) {
  const std::size_t n = std::min(a.states.size(), b.states.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const State x = to_state(a.states[k]), y = to_state(b.states[k]);
    for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::fabs(x[i] - y[i]));
  }
  return worst;
}

}  // namespace berwald
