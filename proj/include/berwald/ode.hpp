#pragma once

// Dormand-Prince 5(4) with the standard fourth-order dense output.

#include <array>
#include <functional>
#include <limits>
#include <vector>

namespace berwald {

using State = std::vector<double>;
using OdeRhs = std::function<void(double s, const State& y, State& dy)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h0 = 0.0;  // 0 picks an initial step automatically
  double hmax = std::numeric_limits<double>::infinity();
  long max_steps = 200000;
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
  long evaluations = 0;
  double max_error = 0.0;  // largest accepted scaled error estimate
};

// One accepted step with its interpolant.
class DenseStep {
 public:
  double s0 = 0, s1 = 0;
  State y0, y1;

  State at(double s) const;

 private:
  friend class Dopri5;
  std::array<State, 5> rcont_;
};

class Dopri5 {
 public:
  Dopri5(OdeRhs rhs, OdeOptions opt = {});

  // Integrates from (s0, y0) to s1 (s1 < s0 allowed). observer runs after
  // every accepted step; returning false stops early. Returns the final
  // state. Throws StepFailure on step-size underflow, non-finite values or
  // too many steps.
  State integrate(double s0, const State& y0, double s1,
                  const std::function<bool(const DenseStep&)>& observer = {});

  const OdeStats& stats() const { return stats_; }
  double last_s() const { return last_s_; }

 private:
  double initial_step(double s0, const State& y0, const State& f0, double dir) const;

  OdeRhs rhs_;
  OdeOptions opt_;
  OdeStats stats_;
  double last_s_ = 0.0;
};

}  // namespace berwald
