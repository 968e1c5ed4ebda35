#include "berwald/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "berwald/errors.hpp"

namespace berwald {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool finite(const State& y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

State DenseStep::at(double s) const {
  const double h = s1 - s0;
  const double th = h == 0.0 ? 0.0 : (s - s0) / h;
  const double th1 = 1.0 - th;
  State out(y0.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rcont_[0][i] +
             th * (rcont_[1][i] + th1 * (rcont_[2][i] + th * (rcont_[3][i] + th1 * rcont_[4][i])));
  }
  return out;
}

Dopri5::Dopri5(OdeRhs rhs, OdeOptions opt) : rhs_(std::move(rhs)), opt_(opt) {}

double Dopri5::initial_step(double s0, const State& y0, const State& f0, double dir) const {
  const std::size_t n = y0.size();
  double dnf = 0, dny = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = opt_.atol + opt_.rtol * std::fabs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, opt_.hmax);
  State y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + dir * h * f0[i];
  rhs_(s0 + dir * h, y1, f1);
  double der2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sk = opt_.atol + opt_.rtol * std::fabs(y0[i]);
    der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
  }
  der2 = std::sqrt(der2) / h;
  const double der12 = std::max(std::fabs(der2), std::sqrt(dnf));
  const double h1 =
      der12 <= 1e-15 ? std::max(1e-6, std::fabs(h) * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100 * std::fabs(h), h1, opt_.hmax});
}

State Dopri5::integrate(double s0, const State& y0, double s1,
                        const std::function<bool(const DenseStep&)>& observer) {
  stats_ = {};
  last_s_ = s0;
  const std::size_t n = y0.size();
  if (s1 == s0) return y0;
  const double dir = s1 > s0 ? 1.0 : -1.0;
  State y = y0, k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
  rhs_(s0, y, k1);
  ++stats_.evaluations;
  double h = opt_.h0 > 0 ? opt_.h0 : initial_step(s0, y, k1, dir);
  ++stats_.evaluations;
  double s = s0;
  bool last_rejected = false;

  while (dir * (s1 - s) > 0) {
    if (stats_.steps + stats_.rejected >= opt_.max_steps) {
      throw StepFailure("too many steps (" + std::to_string(opt_.max_steps) + ")");
    }
    if (h < 1e-14 * std::max(1.0, std::fabs(s))) {
      throw StepFailure("step size underflow at s = " + std::to_string(s));
    }
    bool final_step = false;
    if (dir * (s + dir * h - s1) >= 0) {
      h = std::fabs(s1 - s);
      final_step = true;
    }
    const double hs = dir * h;
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    rhs_(s + c2 * hs, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs_(s + c3 * hs, yt, k3);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(s + c4 * hs, yt, k4);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(s + c5 * hs, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs_(s + hs, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    rhs_(s + hs, ynew, k7);
    stats_.evaluations += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = opt_.atol + opt_.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double ei =
          hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / static_cast<double>(n));
    if (!std::isfinite(err) || !finite(ynew)) {
      ++stats_.rejected;
      h *= 0.25;
      last_rejected = true;
      continue;
    }

    double fac = err == 0.0 ? 10.0 : 0.9 * std::pow(err, -0.2);
    fac = std::clamp(fac, 0.2, 10.0);
    if (err <= 1.0) {
      ++stats_.steps;
      stats_.max_error = std::max(stats_.max_error, err);
      DenseStep step;
      step.s0 = s;
      step.s1 = final_step ? s1 : s + hs;
      step.y0 = y;
      step.y1 = ynew;
      step.rcont_[0] = y;
      step.rcont_[1].resize(n);
      step.rcont_[2].resize(n);
      step.rcont_[3].resize(n);
      step.rcont_[4].resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double dy = ynew[i] - y[i];
        const double bspl = hs * k1[i] - dy;
        step.rcont_[1][i] = dy;
        step.rcont_[2][i] = bspl;
        step.rcont_[3][i] = dy - hs * k7[i] - bspl;
        step.rcont_[4][i] =
            hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      s = step.s1;
      y = ynew;
      k1 = k7;
      last_s_ = s;
      if (observer && !observer(step)) return y;
      if (last_rejected) fac = std::min(fac, 1.0);
      last_rejected = false;
      h = std::min(h * fac, opt_.hmax);
    } else {
      ++stats_.rejected;
      last_rejected = true;
      h *= std::min(1.0, fac);
    }
  }
  return y;
}

}  // namespace berwald
