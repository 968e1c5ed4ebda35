#pragma once

// Integration of second-order sprays xddot^a = -2 G^a(x, xdot).

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "berwald/connection.hpp"
#include "berwald/ode.hpp"

namespace berwald {

struct GeodesicOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double r_min = 1e-3;
  double sin_min = 1e-3;  // theta stays in [asin(sin_min), pi - asin(sin_min)]
  long max_steps = 200000;
};

struct Trajectory {
  std::vector<double> s;
  std::vector<TangentPoint> states;
  OdeStats stats;
  bool chart_exit = false;
  std::string exit_reason;
  TangentPoint last_good;  // last accepted state inside the chart

  // Throws ChartExit (with the last good state) if the run left the chart.
  void require_complete() const;
  // Header row, then one state per row.
  void write(std::ostream& os) const;
};

using SprayField = std::function<Vec4(const TangentPoint&)>;

// True when p is inside the chart guarded by opt.
bool in_chart(const TangentPoint& p, const GeodesicOptions& opt);

// Integrates the spray over [0, T] and samples n_out equispaced parameters
// from the dense output. Stops at the first accepted step outside the chart.
Trajectory integrate(const SprayField& spray, const TangentPoint& p0, double T, int n_out,
                     const GeodesicOptions& opt = {});

// Autoparallels of the connection.
Trajectory integrate_spray(const ConnectionProfile& conn, const TangentPoint& p0, double T,
                           int n_out, const GeodesicOptions& opt = {});

// Largest componentwise difference over the common samples.
double sup_discrepancy(const Trajectory& a, const Trajectory& b);

}  // namespace berwald
