#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "berwald/connection.hpp"

namespace berwald {

struct Box {
  double t0 = 0.5, t1 = 2.5;
  double r0 = 0.5, r1 = 2.5;
};

struct Grid {
  Box box;
  int nt = 15, nr = 15;

  double t(int i) const;
  double r(int j) const;
  std::size_t size() const { return static_cast<std::size_t>(nt) * static_cast<std::size_t>(nr); }
};

struct SampleOptions {
  Box box;
  std::size_t count = 50;
  std::uint64_t seed = 1;
  // Extra acceptance test on top of the default conic domain
  // (tdot > 0, sin(theta) in [0.2, 0.98], velocity components in [-2, 2]).
  std::function<bool(const TangentPoint&)> accept;
};

// Randomly shifted Halton points mapped into the conic domain. Rejected
// candidates are skipped; InsufficientSamples if too many are rejected.
std::vector<TangentPoint> sample_tangent_points(const SampleOptions& opt);

// Deterministic uniform doubles in [0, 1) from a seed, independent of the
// standard library's distribution implementation.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed);
  double next();

 private:
  std::uint64_t state_;
};

}  // namespace berwald
