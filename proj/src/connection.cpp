#include "berwald/connection.hpp"

#include <cmath>

namespace berwald {

double TangentPoint::w2() const {
  const double s = std::sin(theta);
  return thetadot * thetadot + phidot * phidot * s * s;
}

bool TangentPoint::valid() const {
  const bool moving = tdot != 0.0 || rdot != 0.0 || thetadot != 0.0 || phidot != 0.0;
  return moving && std::sin(theta) != 0.0;
}

ConnectionProfile::ConnectionProfile() = default;

ConnectionProfile::ConnectionProfile(const std::map<std::string, std::string>& sources,
                                     ParamMap params)
    : params_(std::move(params)) {
  for (const auto& [key, src] : sources) {
    int idx = 0;
    if (key.size() >= 2 && key[0] == 'k') {
      try {
        idx = std::stoi(key.substr(1));
      } catch (...) {
        idx = 0;
      }
    }
    if (idx < 1 || idx > 12 || key != "k" + std::to_string(idx)) {
      throw ConfigError("unknown connection coefficient '" + key + "'");
    }
    k_[static_cast<std::size_t>(idx - 1)] = ScalarField::parse(src, params_);
  }
}

std::array<Jet2, 12> ConnectionProfile::jets(double t, double r) const {
  std::array<Jet2, 12> out;
  for (std::size_t i = 0; i < 12; ++i) out[i] = k_[i].jet(t, r);
  return out;
}

std::array<double, 12> ConnectionProfile::values(double t, double r) const {
  std::array<double, 12> out;
  for (std::size_t i = 0; i < 12; ++i) out[i] = k_[i].value(t, r);
  return out;
}

bool ConnectionProfile::uses_k11_k12() const {
  return !k_[10].is_literal_zero() || !k_[11].is_literal_zero();
}

Christoffel christoffel(const std::array<double, 12>& k, double theta) {
  Christoffel g{};
  const double s = std::sin(theta), c = std::cos(theta);
  const double s2 = s * s;
  auto set = [&](int a, int b, int cc, double x) {
    g[a][b][cc] = x;
    g[a][cc][b] = x;
  };
  set(kT, kT, kT, k[0]);
  set(kT, kT, kR, k[1]);
  set(kT, kR, kR, k[2]);
  set(kR, kT, kT, k[3]);
  set(kR, kR, kR, k[4]);
  set(kR, kT, kR, k[5]);
  set(kT, kTheta, kTheta, k[6]);
  set(kT, kPhi, kPhi, k[6] * s2);
  set(kTheta, kTheta, kT, k[7]);
  set(kPhi, kPhi, kT, k[7]);
  set(kTheta, kTheta, kR, k[8]);
  set(kPhi, kPhi, kR, k[8]);
  set(kR, kTheta, kTheta, k[9]);
  set(kR, kPhi, kPhi, k[9] * s2);
  set(kPhi, kT, kTheta, k[10] / s);
  set(kTheta, kPhi, kT, -k[10] * s);
  set(kPhi, kR, kTheta, k[11] / s);
  set(kTheta, kR, kPhi, -k[11] * s);
  set(kTheta, kPhi, kPhi, -s * c);
  set(kPhi, kTheta, kPhi, c / s);
  return g;
}

Christoffel christoffel(const ConnectionProfile& conn, double t, double r, double theta) {
  return christoffel(conn.values(t, r), theta);
}

Vec4 spray_coefficients(const Christoffel& gamma, const Vec4& v) {
  Vec4 G{};
  for (int a = 0; a < 4; ++a) {
    double acc = 0.0;
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) acc += gamma[a][b][c] * v[b] * v[c];
    }
    G[a] = 0.5 * acc;
  }
  return G;
}

Vec4 spray_coefficients(const ConnectionProfile& conn, const TangentPoint& p) {
  return spray_coefficients(christoffel(conn, p.t, p.r, p.theta), p.v());
}

}  // namespace berwald
