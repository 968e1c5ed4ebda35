#include "berwald/potential.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

#include "berwald/errors.hpp"

namespace berwald {

void Residual::update(double v, std::vector<double> at) {
  ++samples;
  if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
  if (where.empty() || v > value) {
    value = v;
    where = std::move(at);
  }
}

namespace {

constexpr double kQuadTol = 1e-11;

// Bisection over fixed GK15 panels. A panel is accepted when its error
// estimate is below tol * (1 + |I|) per unit length, counting panels
// shorter than 0.01 as 0.01 long, so short legs stop above the rounding floor.
double panel(const std::function<double(double)>& f, double a, double b, double tol_per_len,
             int depth) {
  double err = 0.0;
  const double I =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  if (depth >= 12 || err <= tol_per_len * std::max(std::fabs(b - a), 0.01) * (1.0 + std::fabs(I))) return I;
  const double m = 0.5 * (a + b);
  return panel(f, a, m, tol_per_len, depth + 1) + panel(f, m, b, tol_per_len, depth + 1);
}

double leg(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  return panel(f, a, b, rel_tol, 0);
}

double leg_t(const OneForm& form, double r, double t0, double t1, double tol) {
  return leg([&](double t) { return form(t, r)[0]; }, t0, t1, tol);
}

double leg_r(const OneForm& form, double t, double r0, double r1, double tol) {
  return leg([&](double r) { return form(t, r)[1]; }, r0, r1, tol);
}

}  // namespace

double integrate_l_path(const OneForm& form, double t0, double r0, double t1, double r1,
                        double rel_tol) {
  return leg_t(form, r0, t0, t1, rel_tol) + leg_r(form, t1, r0, r1, rel_tol);
}

double integrate_transposed_path(const OneForm& form, double t0, double r0, double t1, double r1,
                                 double rel_tol) {
  return leg_r(form, t0, r0, r1, rel_tol) + leg_t(form, r1, t0, t1, rel_tol);
}

double path_integral(const OneForm& form, std::array<double, 2> from, std::array<double, 2> to,
                     double agreement) {
  const double a = integrate_l_path(form, from[0], from[1], to[0], to[1]);
  const double b = integrate_transposed_path(form, from[0], from[1], to[0], to[1]);
  if (!(std::fabs(a - b) <= agreement * (1 + std::fabs(a)))) {
    throw NotClosed("path integral depends on the path: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
  return a;
}

double curl(const OneForm& form, double t, double r, double h) {
  auto central = [&](double step) {
    const double dQ = (form(t + step, r)[1] - form(t - step, r)[1]) / (2 * step);
    const double dP = (form(t, r + step)[0] - form(t, r - step)[0]) / (2 * step);
    return dQ - dP;
  };
  // Two Richardson levels: O(h^6).
  const double d1 = central(h), d2 = central(h / 2), d4 = central(h / 4);
  const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
  return (16 * r2 - r1) / 15;
}

Potential::Potential(OneForm form, const Grid& grid, std::string name)
    : form_(std::make_shared<const OneForm>(std::move(form))),
      grid_(grid),
      name_(std::move(name)),
      nodes_(grid.size(), 0.0) {
  const int nr = grid_.nr;
  for (int i = 1; i < grid_.nt; ++i) {
    nodes_[i * nr] = nodes_[(i - 1) * nr] + leg_t(*form_, grid_.r(0), grid_.t(i - 1), grid_.t(i), kQuadTol);
  }
  for (int i = 0; i < grid_.nt; ++i) {
    for (int j = 1; j < nr; ++j) {
      nodes_[i * nr + j] =
          nodes_[i * nr + j - 1] + leg_r(*form_, grid_.t(i), grid_.r(j - 1), grid_.r(j), kQuadTol);
    }
  }
}

Potential::Potential(JetForm form, const Grid& grid, std::string name)
    : Potential(
          [form](double t, double r) -> std::array<double, 2> {
            const auto pq = form(t, r);
            return {pq[0].v, pq[1].v};
          },
          grid, std::move(name)) {
  jet_form_ = std::make_shared<const JetForm>(std::move(form));
}

double Potential::node(int i, int j) const { return nodes_[static_cast<std::size_t>(i * grid_.nr + j)]; }

double Potential::value(double t, double r) const {
  auto nearest = [](double x, double lo, double hi, int n) {
    if (n <= 1) return 0;
    const double u = (x - lo) / (hi - lo) * (n - 1);
    return static_cast<int>(std::clamp(std::lround(u), 0L, static_cast<long>(n - 1)));
  };
  const std::pair<double, double> key{t, r};
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    const auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  const int i = nearest(t, grid_.box.t0, grid_.box.t1, grid_.nt);
  const int j = nearest(r, grid_.box.r0, grid_.box.r1, grid_.nr);
  const double v = node(i, j) + integrate_l_path(*form_, grid_.t(i), grid_.r(j), t, r);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (cache_->values.size() >= kCacheLimit) cache_->values.clear();
  cache_->values.emplace(key, v);
  return v;
}

Jet2 Potential::jet(double t, double r) const {
  const auto g = gradient(t, r);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return make_jet2(value(t, r), g[0], g[1], nan, nan, nan);
}

Residual Potential::closedness(double tol) const {
  Residual res;
  res.name = name_ + ".closedness";
  res.tolerance = tol;
  for (int i = 0; i < grid_.nt; ++i) {
    for (int j = 0; j < grid_.nr; ++j) {
      const double t = grid_.t(i), r = grid_.r(j);
      const auto pq = gradient(t, r);
      double c = std::numeric_limits<double>::quiet_NaN();
      if (jet_form_) {
        const auto j = (*jet_form_)(t, r);
        c = d_t(j[1]) - d_r(j[0]);
      }
      if (std::isnan(c)) c = curl(*form_, t, r);
      res.update(std::fabs(c) / (1 + std::fabs(pq[0]) + std::fabs(pq[1])), {t, r});
    }
  }
  return res;
}

Residual Potential::path_independence(double tol) const {
  Residual res;
  res.name = name_ + ".path_independence";
  res.tolerance = tol;
  const int mt = grid_.nt - 1, mr = grid_.nr - 1;
  std::vector<std::array<int, 2>> targets = {{mt, 0}, {0, mr}, {mt, mr}, {mt / 2, mr / 2}};
  for (int k = 1; k <= std::min(mt, mr); ++k) targets.push_back({k, k});
  const double t0 = grid_.t(0), r0 = grid_.r(0);
  for (const auto& ij : targets) {
    const double t = grid_.t(ij[0]), r = grid_.r(ij[1]);
    const double a = node(ij[0], ij[1]);
    const double b = integrate_transposed_path(*form_, t0, r0, t, r);
    res.update(std::fabs(a - b) / (1 + std::fabs(a)), {t, r});
  }
  return res;
}

}  // namespace berwald
