#include "berwald/sampling.hpp"

#include <cmath>
#include <numbers>

namespace berwald {

double Grid::t(int i) const {
  return nt == 1 ? box.t0 : box.t0 + (box.t1 - box.t0) * i / (nt - 1);
}
double Grid::r(int j) const {
  return nr == 1 ? box.r0 : box.r0 + (box.r1 - box.r0) * j / (nr - 1);
}

UniformStream::UniformStream(std::uint64_t seed) : state_(seed) {}

double UniformStream::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

namespace {

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return x;
}

}  // namespace

std::vector<TangentPoint> sample_tangent_points(const SampleOptions& opt) {
  static const unsigned primes[9] = {2, 3, 5, 7, 11, 13, 17, 19, 23};
  UniformStream rng(opt.seed);
  double shift[9];
  for (double& s : shift) s = rng.next();

  std::vector<TangentPoint> out;
  const std::size_t max_draws = 1000 * (opt.count + 1);
  for (std::uint64_t i = 1; out.size() < opt.count; ++i) {
    if (i > max_draws) {
      throw InsufficientSamples("only " + std::to_string(out.size()) + " of " +
                                std::to_string(opt.count) + " samples admissible");
    }
    double u[9];
    for (int d = 0; d < 9; ++d) {
      u[d] = radical_inverse(i, primes[d]) + shift[d];
      u[d] -= std::floor(u[d]);
    }
    TangentPoint p;
    p.t = opt.box.t0 + (opt.box.t1 - opt.box.t0) * u[0];
    p.r = opt.box.r0 + (opt.box.r1 - opt.box.r0) * u[1];
    const double s = 0.2 + 0.78 * u[2];
    p.theta = u[3] < 0.5 ? std::asin(s) : std::numbers::pi - std::asin(s);
    p.phi = 2.0 * std::numbers::pi * u[4];
    p.tdot = 2.0 * (1.0 - u[5]);  // (0, 2]
    p.rdot = -2.0 + 4.0 * u[6];
    p.thetadot = -2.0 + 4.0 * u[7];
    p.phidot = -2.0 + 4.0 * u[8];
    if (!p.valid()) continue;
    if (opt.accept && !opt.accept(p)) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace berwald
