#pragma once

// SO(3)-invariant torsion-free connections on (t, r, theta, phi) and the
// pointwise data attached to them.

#include <array>
#include <map>
#include <string>

#include "berwald/scalar_field.hpp"

namespace berwald {

enum Coord { kT = 0, kR = 1, kTheta = 2, kPhi = 3 };

using Vec4 = std::array<double, 4>;

struct TangentPoint {
  double t = 0, r = 0, theta = 0, phi = 0;
  double tdot = 0, rdot = 0, thetadot = 0, phidot = 0;

  Vec4 x() const { return {t, r, theta, phi}; }
  Vec4 v() const { return {tdot, rdot, thetadot, phidot}; }
  static TangentPoint from(const Vec4& x, const Vec4& v) {
    return {x[0], x[1], x[2], x[3], v[0], v[1], v[2], v[3]};
  }
  double w2() const;
  // Nonzero velocity and sin(theta) != 0.
  bool valid() const;
};

// Gamma[a][b][c] is the Christoffel symbol Gamma^a_bc.
using Christoffel = std::array<std::array<Vec4, 4>, 4>;

class ConnectionProfile {
 public:
  ConnectionProfile();  // all k_i = 0
  // Keys "k1".."k12"; absent keys default to 0. Unknown keys are an error.
  ConnectionProfile(const std::map<std::string, std::string>& sources, ParamMap params);

  // i is 1-based, matching k1..k12.
  const ScalarField& k(int i) const { return k_[static_cast<std::size_t>(i - 1)]; }
  const ParamMap& params() const { return params_; }

  std::array<Jet2, 12> jets(double t, double r) const;
  std::array<double, 12> values(double t, double r) const;

  // k11 and k12 are not the literal 0.
  bool uses_k11_k12() const;

 private:
  std::array<ScalarField, 12> k_;
  ParamMap params_;
};

Christoffel christoffel(const std::array<double, 12>& k, double theta);
Christoffel christoffel(const ConnectionProfile& conn, double t, double r, double theta);

// G^a = 1/2 Gamma^a_bc xdot^b xdot^c.
Vec4 spray_coefficients(const Christoffel& gamma, const Vec4& v);
Vec4 spray_coefficients(const ConnectionProfile& conn, const TangentPoint& p);

}  // namespace berwald
