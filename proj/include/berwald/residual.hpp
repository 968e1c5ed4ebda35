#pragma once

#include <string>
#include <vector>

namespace berwald {

// One named numerical check: the worst residual, where it happened and the
// tolerance it is held to.
struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::vector<double> where;  // coordinates of the worst sample
  std::size_t samples = 0;
  std::size_t skipped = 0;

  bool pass() const { return value <= tolerance; }
  // Keeps the larger residual; NaN counts as a failure.
  void update(double v, std::vector<double> at);
};

}  // namespace berwald
