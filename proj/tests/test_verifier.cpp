#include <gtest/gtest.h>

#include <cmath>

#include "berwald/errors.hpp"
#include "berwald/verifier.hpp"
#include "fixtures.hpp"

namespace berwald {
namespace {

Grid small_grid() {
  Grid g;
  g.nt = g.nr = 7;
  return g;
}

std::vector<TangentPoint> samples(const FinslerFunction& L, std::size_t n = 20) {
  SampleOptions s;
  s.count = n;
  s.seed = 3;
  s.accept = [&L](const TangentPoint& p) { return L.in_domain(p); };
  return sample_tangent_points(s);
}

const char* kMinkowski = "tdot^2 - rdot^2 - thetadot^2 - sin(theta)^2*phidot^2";

class Scaled : public FinslerFunction {
 public:
  Scaled(const FinslerFunction& L, double c) : L_(L), c_(c) {}
  Jet8 evaluate(const TangentPoint& p) const override { return c_ * L_.evaluate(p); }
  bool in_domain(const TangentPoint& p) const override { return L_.in_domain(p); }
  std::string formula() const override { return "c L"; }

 private:
  const FinslerFunction& L_;
  double c_;
};

TEST(Horizontal, Example1BuiltL) {
  const auto conn = fixtures::example1(3.0);
  const auto L = build_power_law(conn, small_grid());
  const auto res = check_horizontal_constancy(*L, conn, samples(*L, 50));
  EXPECT_TRUE(res.pass()) << res.value;
  EXPECT_EQ(res.samples, 50u);
}

TEST(Horizontal, FlatMinkowski) {
  const ExpressionFinsler A(kMinkowski, {});
  const auto res = check_horizontal_constancy(A, fixtures::flat(), samples(A), 1e-10);
  EXPECT_TRUE(res.pass()) << res.value;
}

TEST(Horizontal, WrongConnectionFails) {
  // delta_t (tdot^2) = -2 k1 tdot^2 with k1 = 1.
  const ExpressionFinsler L("tdot^2", {});
  const auto res = check_horizontal_constancy(L, fixtures::class4_k1(), samples(L));
  EXPECT_FALSE(res.pass());
  EXPECT_GT(res.value, 0.1);
}

TEST(Horizontal, ScaleInvariantVerdict) {
  const auto conn = fixtures::example2();
  const auto L = build_power_law(conn, small_grid());
  const auto pts = samples(*L, 20);
  for (double c : {1e-3, 1.0, 250.0}) {
    const Scaled cL(*L, c);
    EXPECT_TRUE(check_horizontal_constancy(cL, conn, pts).pass());
  }
  const ExpressionFinsler bad("tdot^2 + rdot^2", {});
  for (double c : {1e-3, 1.0, 250.0}) {
    EXPECT_FALSE(check_horizontal_constancy(Scaled(bad, c), conn, pts).pass());
  }
}

TEST(Horizontal, SkipsOutsideDomain) {
  const ExpressionFinsler L("sqrt(tdot - 1)^2", {});
  std::vector<TangentPoint> pts = {{1, 1, 1, 0, 0.5, 0, 0, 0}, {1, 1, 1, 0, 2, 0, 0, 0}};
  const auto res = check_horizontal_constancy(L, fixtures::flat(), pts);
  EXPECT_EQ(res.skipped, 1u);
  EXPECT_EQ(res.samples, 1u);
}

TEST(Hessian, Example2Determinant) {
  const ExpressionFinsler L(
      "exp(t*r/2) * tdot^(1/2) * (rdot^2 - thetadot^2 - phidot^2*sin(theta)^2)^(3/4)", {});
  SampleOptions s;
  s.count = 25;
  s.accept = [&L](const TangentPoint& p) { return L.in_domain(p); };
  for (const auto& p : sample_tangent_points(s)) {
    const Eigen::Matrix4d g = vertical_metric(L, p);
    const double expect = -27.0 / 256.0 * std::exp(2 * p.t * p.r) * std::pow(std::sin(p.theta), 2);
    EXPECT_NEAR(g.determinant(), expect, 1e-6 * std::fabs(expect));
    EXPECT_NEAR((2 * g).determinant(), 16 * expect, 1e-6 * 16 * std::fabs(expect));
  }
  const auto rep = check_hessian(L, sample_tangent_points(s));
  EXPECT_TRUE(rep.pass());
}

TEST(Hessian, MinkowskiSignature) {
  const ExpressionFinsler A(kMinkowski, {});
  const auto rep = check_hessian(A, samples(A));
  EXPECT_EQ(rep.signature, "(+,-,-,-)");
  EXPECT_TRUE(rep.signature_constant);
}

TEST(Hessian, RankOneIsDegenerate) {
  const ExpressionFinsler L("tdot^2", {});
  EXPECT_THROW(check_hessian(L, samples(L)), Degenerate);
}

TEST(Hessian, Example1LorentzianForAlpha3) {
  const auto L = build_power_law(fixtures::example1(3.0), small_grid());
  const auto rep = check_hessian(*L, samples(*L, 30));
  EXPECT_TRUE(rep.signature_constant);
  EXPECT_EQ(rep.signature, "(+,-,-,-)");
}

TEST(LeviCivita, FlatMinkowskiExact) {
  const auto A = build_class4(fixtures::flat(), small_grid());
  const Christoffel g = levi_civita(*A, 1.2, 0.9, 0.7);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        double expect = 0.0;
        if (a == kTheta && b == kPhi && c == kPhi) expect = -std::sin(0.7) * std::cos(0.7);
        if (a == kPhi && ((b == kTheta && c == kPhi) || (b == kPhi && c == kTheta))) {
          expect = 1.0 / std::tan(0.7);
        }
        EXPECT_NEAR(g[a][b][c], expect, 1e-10) << a << b << c;
      }
    }
  }
}

TEST(LeviCivita, Class3RoundTrip) {
  const auto fx = fixtures::random_class3(2);
  const auto m = metrize(fx.conn, small_grid(), 3);
  const auto res = levi_civita_roundtrip(*m.riemann, fx.conn, samples(*m.riemann, 8));
  EXPECT_TRUE(res.pass()) << res.value;
}

TEST(LeviCivita, Class5RoundTrip) {
  const auto conn = fixtures::class5_symmetric();
  const auto A = build_class5(conn, small_grid());
  const auto res = levi_civita_roundtrip(*A, conn, samples(*A, 10));
  EXPECT_TRUE(res.pass()) << res.value;
}

TEST(LeviCivita, CorruptedMetricFails) {
  const ExpressionMetric A("(1 + 0.1*t)*tdot^2 - rdot^2 - thetadot^2 - sin(theta)^2*phidot^2", {});
  const auto res = levi_civita_roundtrip(A, fixtures::flat(), samples(A, 5));
  EXPECT_FALSE(res.pass());
  EXPECT_GT(res.value, 1e-3);
}

TEST(Berwald, QuadraticPasses) {
  const ExpressionFinsler A(kMinkowski, {});
  EXPECT_TRUE(berwald_check(A, samples(A, 10)).pass());
}

TEST(Berwald, Example1Passes) {
  const auto L = build_power_law(fixtures::example1(3.0), small_grid());
  const auto res = berwald_check(*L, samples(*L, 10));
  EXPECT_TRUE(res.pass()) << res.value;
  EXPECT_GT(res.samples, 0u);
}

TEST(Berwald, RandersFails) {
  const ExpressionFinsler L(
      "(sqrt(tdot^2 + rdot^2 + thetadot^2 + phidot^2) + 0.3*t*rdot)^2", {});
  const auto res = berwald_check(L, samples(L, 10));
  EXPECT_FALSE(res.pass());
  EXPECT_GT(res.value, 1e-3);
}

TEST(FinslerSpray, QuadraticMatchesConnection) {
  const auto conn = fixtures::class5_symmetric();
  const auto A = build_class5(conn, small_grid());
  for (const auto& p : samples(*A, 5)) {
    const Vec4 G = finsler_spray(*A, p);
    const Vec4 ref = spray_coefficients(conn, p);
    for (int a = 0; a < 4; ++a) EXPECT_NEAR(G[a], ref[a], 1e-8 * (1 + std::fabs(ref[a])));
  }
}

TEST(GeodesicAgreement, Example1LeavesChartAtFullSpeed) {
  // r'' is about -190 at the start, so r reaches 0 near s = 0.14.
  const auto conn = fixtures::example1(3.0);
  const auto L = build_power_law(conn, small_grid());
  const TangentPoint p0{1.0, 2.0, M_PI / 2, 0.0, 1.0, 0.1, 0.05, 0.02};
  EXPECT_THROW(geodesic_agreement(*L, conn, p0, 0.5), ChartExit);
}

TEST(GeodesicAgreement, Example1) {
  const auto conn = fixtures::example1(3.0);
  const auto L = build_power_law(conn, small_grid());
  const TangentPoint p0{1.0, 2.0, M_PI / 2, 0.0, 0.2, 0.02, 0.01, 0.004};
  const auto ga = geodesic_agreement(*L, conn, p0, 0.5);
  EXPECT_TRUE(ga.discrepancy.pass()) << ga.discrepancy.value;
  EXPECT_TRUE(ga.drift.pass()) << ga.drift.value;
  EXPECT_EQ(ga.autoparallel.states.size(), 100u);
}

TEST(GeodesicAgreement, WrongLFails) {
  const ExpressionFinsler L("tdot^2 - rdot^2 - thetadot^2 - sin(theta)^2*phidot^2", {});
  const TangentPoint p0{1.0, 2.0, M_PI / 2, 0.0, 0.2, 0.02, 0.01, 0.004};
  const auto ga = geodesic_agreement(L, fixtures::example1(3.0), p0, 0.5);
  EXPECT_FALSE(ga.discrepancy.pass());
  EXPECT_FALSE(ga.drift.pass());
}

TEST(QuadraticFit, RulesOutPowerLawAndAsymmetricClass5) {
  const std::vector<std::array<double, 3>> pts = {{1.3, 1.1, 1.0}, {0.8, 2.0, 0.7}};
  for (const auto& conn : {fixtures::example1(3.0), fixtures::example2(), fixtures::exponential(),
                           fixtures::class5_asymmetric()}) {
    const auto fit = quadratic_fit(conn, pts);
    EXPECT_TRUE(fit.rules_out()) << fit.residual;
    EXPECT_FALSE(fit.nondegenerate_solution);
  }
}

TEST(QuadraticFit, FindsMetricWhenOneExists) {
  const std::vector<std::array<double, 3>> pts = {{1.3, 1.1, 1.0}, {0.8, 2.0, 0.7}};
  for (const auto& conn :
       {fixtures::class5_symmetric(), fixtures::flat(), fixtures::random_class3(4).conn}) {
    const auto fit = quadratic_fit(conn, pts);
    EXPECT_TRUE(fit.nondegenerate_solution);
    EXPECT_EQ(fit.residual, 0.0);
  }
}

}  // namespace
}  // namespace berwald
