#include <gtest/gtest.h>

#include <cmath>

#include "berwald/classifier.hpp"
#include "berwald/errors.hpp"
#include "fixtures.hpp"

namespace berwald {
namespace {

Grid small_grid() {
  Grid g;
  g.nt = g.nr = 7;
  return g;
}

ClassificationReport run(const ConnectionProfile& conn) {
  SampleOptions s;
  s.count = 30;
  s.seed = 4;
  return classify(conn, small_grid(), s);
}

TEST(Classify, Example1IsPowerLaw) {
  const auto rep = run(fixtures::example1(3.0));
  EXPECT_EQ(rep.finsler, Verdict::kYes);
  EXPECT_EQ(rep.class_label, 1);
  EXPECT_EQ(rep.riemann, Verdict::kNo);
  EXPECT_EQ(rep.holonomy.rank, 3);
  EXPECT_NEAR(rep.ricci_asymmetry, -8.0, 1e-10);
}

TEST(Classify, Example2SymmetricRicciStillNo) {
  const auto rep = run(fixtures::example2());
  EXPECT_EQ(rep.class_label, 1);
  EXPECT_EQ(rep.riemann, Verdict::kNo);
  EXPECT_NEAR(rep.ricci_asymmetry, 0.0, 1e-12);
  EXPECT_EQ(rep.holonomy.rank, 3);
}

TEST(Classify, ExponentialIsClass2) {
  const auto rep = run(fixtures::exponential());
  EXPECT_EQ(rep.finsler, Verdict::kYes);
  EXPECT_EQ(rep.class_label, 2);
  EXPECT_EQ(rep.riemann, Verdict::kNo);
  const auto cp = curvature_profile(fixtures::exponential(), 1.2, 2.1);
  EXPECT_NEAR(cp.D.v, 0.0, 1e-10);
  EXPECT_NEAR(cp.E.v, std::exp(0.81), 1e-10);
  EXPECT_NEAR(cp.F.v, 1.0, 1e-10);
}

TEST(Classify, FlatIsClass4) {
  const auto rep = run(fixtures::flat());
  EXPECT_EQ(rep.class_label, 4);
  EXPECT_EQ(rep.riemann, Verdict::kYes);
  EXPECT_EQ(rep.holonomy.rank, 1);
  EXPECT_EQ(run(fixtures::class4_k1()).class_label, 4);
}

TEST(Classify, MinkowskiSphericalIsClass3) {
  const auto rep = run(fixtures::minkowski_spherical());
  EXPECT_EQ(rep.class_label, 3);
  EXPECT_EQ(rep.riemann, Verdict::kYes);
}

TEST(Classify, RandomClass3Profiles) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto rep = run(fixtures::random_class3(seed).conn);
    EXPECT_EQ(rep.class_label, 3) << seed;
    EXPECT_EQ(rep.riemann, Verdict::kYes);
    EXPECT_LE(rep.holonomy.rank, 2);
  }
}

TEST(Classify, Class5RiemannFollowsRicci) {
  const auto sym = run(fixtures::class5_symmetric());
  EXPECT_EQ(sym.class_label, 5);
  EXPECT_EQ(sym.riemann, Verdict::kYes);
  EXPECT_EQ(sym.holonomy.rank, 2);
  // a1 a3 - a2 a4 = 0 here, so the definitional variant is flagged.
  EXPECT_FALSE(sym.notes.empty());

  const auto asym = run(fixtures::class5_asymmetric());
  EXPECT_EQ(asym.class_label, 5);
  EXPECT_EQ(asym.riemann, Verdict::kNo);
  EXPECT_GT(std::fabs(asym.ricci_asymmetry), 1e-3);
}

TEST(Classify, RandomConnectionIsNotMetrizable) {
  UniformStream rng(21);
  const auto rep = run(fixtures::random_polynomial(rng));
  EXPECT_EQ(rep.finsler, Verdict::kNo);
  EXPECT_EQ(rep.class_label, 0);
  EXPECT_EQ(rep.riemann, Verdict::kNo);
}

TEST(Classify, GapBandIsUndetermined) {
  const auto rep = run(ConnectionProfile({{"k1", "1e-8*r"}}, {}));
  EXPECT_EQ(rep.finsler, Verdict::kUndetermined);
  EXPECT_EQ(rep.class_label, 0);
}

TEST(Classify, Errors) {
  EXPECT_THROW(run(ConnectionProfile({{"k11", "1"}, {"k10", "1"}}, {})), UnsupportedConnection);
  EXPECT_THROW(run(ConnectionProfile({{"k7", "1"}}, {})), K10Degenerate);
  // k10 vanishes on the t = 1.5 grid line only.
  EXPECT_THROW(run(ConnectionProfile({{"k10", "(t-1.5)^2*r"}}, {})), MixedClass);
}

TEST(FinslerConstraints, Example1ResidualsVanish) {
  const auto fr = check_finsler_constraints(fixtures::example1(3.0), small_grid());
  EXPECT_EQ(fr.verdict, Verdict::kYes);
  for (const auto& q : fr.quantities) EXPECT_LT(q.max_scaled, 1e-12) << q.name;
  ASSERT_NE(fr.find("B"), nullptr);
  EXPECT_EQ(fr.find("nothing"), nullptr);
}

TEST(FinslerConstraints, WCornerZeroChecksA6ToA13) {
  const auto fr = check_finsler_constraints(fixtures::flat(), small_grid());
  EXPECT_EQ(fr.corner, WCorner::kZero);
  EXPECT_NE(fr.find("a13"), nullptr);
  EXPECT_EQ(fr.find("A"), nullptr);
}

TEST(ClassifyProperty, PowerAndExponentialHaveRankThree) {
  for (double alpha : {2.5, 3.0, 4.0, 7.0}) {
    const auto rep = run(fixtures::example1(alpha));
    EXPECT_EQ(rep.class_label, 1);
    EXPECT_EQ(rep.holonomy.rank, 3);
  }
}

TEST(ClassifyProperty, Deterministic) {
  const auto a = run(fixtures::exponential()), b = run(fixtures::exponential());
  ASSERT_EQ(a.evidence.size(), b.evidence.size());
  for (std::size_t i = 0; i < a.evidence.size(); ++i) {
    EXPECT_EQ(a.evidence[i].max_scaled, b.evidence[i].max_scaled);
  }
  EXPECT_EQ(a.ricci_asymmetry, b.ricci_asymmetry);
}

}  // namespace
}  // namespace berwald
