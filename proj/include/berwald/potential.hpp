#pragma once

// Potentials of closed one-forms P dt + Q dr, recovered by line integration
// from a base point.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "berwald/jet.hpp"
#include "berwald/residual.hpp"
#include "berwald/sampling.hpp"

namespace berwald {

using OneForm = std::function<std::array<double, 2>(double t, double r)>;
// A one-form whose components carry first partials, for an exact curl.
using JetForm = std::function<std::array<Jet2, 2>(double t, double r)>;

// Integral along the L-path (t0, r0) -> (t1, r0) -> (t1, r1) by GK15 panel
// bisection per leg; rel_tol bounds the error per unit length relative to
// 1 + |integral|.
double integrate_l_path(const OneForm& form, double t0, double r0, double t1, double r1,
                        double rel_tol = 1e-11);
// Same, legs in the other order: (t0, r0) -> (t0, r1) -> (t1, r1).
double integrate_transposed_path(const OneForm& form, double t0, double r0, double t1, double r1,
                                 double rel_tol = 1e-11);

// Integral along the L-path, certified against the transposed path.
// Throws NotClosed when the two differ by more than agreement * (1 + |I|).
double path_integral(const OneForm& form, std::array<double, 2> from, std::array<double, 2> to,
                     double agreement = 1e-8);

// Curl d_t Q - d_r P at a point by Richardson-extrapolated central
// differences of the form.
double curl(const OneForm& form, double t, double r, double h = 1e-3);

// Potential with value 0 at the lower-left corner of the grid. Node values
// are cached; other points are reached by integrating from the nearest node.
class Potential {
 public:
  Potential() = default;
  Potential(OneForm form, const Grid& grid, std::string name);
  Potential(JetForm form, const Grid& grid, std::string name);

  double value(double t, double r) const;
  std::array<double, 2> gradient(double t, double r) const { return (*form_)(t, r); }
  // Value and gradient; second partials are NaN.
  Jet2 jet(double t, double r) const;

  double node(int i, int j) const;
  const Grid& grid() const { return grid_; }
  const std::string& name() const { return name_; }
  const OneForm& form() const { return *form_; }

  // Curl at every node, relative to 1 + |P| + |Q|. Exact from the jets
  // when the form carries them, else by finite differences.
  Residual closedness(double tol = 1e-8) const;
  // L-path against transposed path from the base to the far corners, the
  // centre and the diagonal nodes, relative to 1 + |value|.
  Residual path_independence(double tol = 1e-8) const;

 private:
  std::shared_ptr<const OneForm> form_;
  std::shared_ptr<const JetForm> jet_form_;
  Grid grid_;
  std::string name_;
  std::vector<double> nodes_;  // index i * nr + j

  // Off-node values by exact (t, r); shared by copies.
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<double, double>, double> values;
  };
  static constexpr std::size_t kCacheLimit = 1 << 16;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace berwald
