#pragma once

// Connection profiles shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <functional>
#include <string>

#include "berwald/connection.hpp"
#include "berwald/sampling.hpp"

namespace berwald::fixtures {

// Power law, non-symmetric Ricci; alpha is a parameter.
ConnectionProfile example1(double alpha = 3.0);
// Displayed Finsler function of example1.
double example1_L(double alpha, const TangentPoint& p);

// Power law, symmetric Ricci with Phi = t r.
ConnectionProfile example2();
double example2_L(const TangentPoint& p);

// Exponential law. k2 carries "+2t" (see the decisions ledger).
ConnectionProfile exponential();
double exponential_L(const TangentPoint& p);
double exponential_phi(double t, double r);
double exponential_mu(double t, double r);

ConnectionProfile flat();
ConnectionProfile class4_k1();  // k1 = 1, everything else 0
// Minkowski space in spherical coordinates: k9 = 1/r, k10 = -r.
ConnectionProfile minkowski_spherical();

// w-corner zero, tr-corner k1 = p(t, r), k5 = q(t, r).
ConnectionProfile class5(const std::string& k1, const std::string& k5);
ConnectionProfile class5_symmetric();   // k1 = 2 t r, k5 = t^2 (a1 + a4 = 0)
ConnectionProfile class5_asymmetric();  // k1 = 4 t r, k5 = t^2 (a1 + a4 = 2t)

// Random quadratic polynomial k1..k10 (k11 = k12 = 0).
ConnectionProfile random_polynomial(UniformStream& rng);

// Levi-Civita connection of eta_AB dX^A dX^B - e^{2K} w^2 with X a random
// quadratic map of (t, r) and eta a constant 2x2 form. K is a quadratic in
// xi = n_A X^A, so the constant vector field annihilating d xi is parallel;
// that parallel one-form is what puts the profile in Class 3 rather than
// making it merely Riemannian.
struct Class3Fixture {
  ConnectionProfile conn;
  std::string K;                                  // expression of K(t, r)
  std::function<double(const TangentPoint&)> A;   // the generating metric
  std::uint64_t seed = 0;
};
Class3Fixture random_class3(std::uint64_t seed, const Box& box = {});

// Brute-force search over k1 = c1 t^i r^j, k5 = c2 t^m r^n with small
// integer coefficients for a Class-5 profile. symmetric selects a1 + a4 = 0
// on the grid; otherwise a1 + a4 must be nonzero everywhere. Returns the k1
// and k5 sources.
std::pair<std::string, std::string> search_class5(bool symmetric, const Grid& grid);

}  // namespace berwald::fixtures
