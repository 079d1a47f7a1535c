#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "collapse/crosscheck.hpp"
#include "collapse/equilibria.hpp"
#include "collapse/reduced_maps.hpp"

using namespace collapse;

namespace {

const MapParams kP = MapParams::from_bT(0.05, 0.525, 1.0, 1.0);

}  // namespace

TEST(MapParams, Construction) {
  auto p = MapParams::from_ab(0.05, 0.525, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(p.T, 0.25);
  EXPECT_NEAR(p.T * p.a, p.b, 1e-12);
  auto q = MapParams::from_bT(0.05, 0.525, 0.5, 0.25);
  EXPECT_DOUBLE_EQ(q.a, 2.0);
  EXPECT_NEAR(MapParams::alpha_from_angle(0.05, M_PI), 0.525, 1e-15);
  MapParams bad = p;
  bad.alpha = 1.2;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(OneCollision, AxisReduction) {
  for (double x : {0.0, 0.1, 0.3}) {
    auto s = one_collision({x, 0.0}, kP);
    EXPECT_NEAR(s.phi1, 0.05 / (0.525 - x), 1e-15);
    EXPECT_EQ(s.phi2, 0.0);
  }
}

TEST(OneCollision, PinnedValue) {
  // 40-digit reference evaluation of the two formulas.
  auto s = one_collision({0.1, 0.01}, kP);
  EXPECT_NEAR(s.phi1, 0.12082191738602266775, 1e-15);
  EXPECT_NEAR(s.phi2, 0.0062893685050608538276, 1e-16);
}

TEST(OneCollision, Errors) {
  try {
    one_collision({0.1, 0.6}, kP);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SqrtDomain);
  }
  try {
    one_collision({0.525, 0.0}, kP);  // D = alpha - phi1 = 0
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SingularDenominator);
  }
  EXPECT_EQ(try_one_collision({0.1, 0.6}, 0.05, 0.525, 1, 1).status, MapStatus::SqrtDomain);
}

TEST(OneCollision, TinyPhi2KeepsPrecision) {
  // phi2' ~ phi2 (phi1 + ...) / D^2 to leading order; no cancellation loss.
  const double y = 1e-30;
  auto s = one_collision({0.1, y}, kP);
  const double D = 0.525 - 0.1;
  EXPECT_NEAR(s.phi2 / y, 0.1 / (D * D), 1e-12);
}

TEST(TwoCollision, AxisExamples) {
  auto s = two_collision({0.0, 0.0}, kP);
  EXPECT_NEAR(s.phi1, 0.05 * 0.525 / (0.525 * 0.525 - 0.05), 1e-15);
  EXPECT_NEAR(s.phi1, 0.11634349030470914, 1e-15);
  EXPECT_EQ(s.phi2, 0.0);
  auto f = two_collision({0.125, 0.0}, kP);
  EXPECT_NEAR(f.phi1, 0.125, 1e-15);
  EXPECT_EQ(f.phi2, 0.0);
}

TEST(TwoCollision, PinnedAsymmetric) {
  auto p = MapParams::from_bT(0.05, 0.525, 0.5, 2.0);
  auto s = two_collision({0.1, 0.01}, p);
  EXPECT_NEAR(s.phi1, 0.12392987891627611477, 1e-15);
  EXPECT_NEAR(s.phi2, 0.0042578586675186022256, 1e-16);
}

TEST(TwoCollision, SymmetricIsSquareOfSymmetricMap) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int n = 0;
  for (int k = 0; k < 5000 && n < 1000; ++k) {
    const double r = 0.01 + 0.2 * u(rng), alpha = 0.3 + 0.6 * u(rng), b = 0.3 + 2 * u(rng);
    auto p = MapParams::symmetric(r, alpha, b);
    ReducedState s{0.5 * alpha * u(rng), 0.5 * u(rng) / (2 * b)};
    auto one = try_symmetric_map(s, p);
    if (!one.ok()) continue;
    auto twice = try_symmetric_map(one.s, p);
    auto two = try_two_collision(s, p);
    if (!twice.ok() || !two.ok()) continue;
    EXPECT_NEAR(two.s.phi1, twice.s.phi1, 1e-12 * std::max(1.0, std::abs(twice.s.phi1)));
    EXPECT_NEAR(two.s.phi2, twice.s.phi2, 1e-12 * std::max(1.0, std::abs(twice.s.phi2)));
    ++n;
  }
  EXPECT_EQ(n, 1000);
}

TEST(TwoCollision, FailureIsTaggedWithStage) {
  // First collision fine, second lands in the sqrt domain violation.
  auto p = MapParams::from_bT(0.05, 0.525, 1.0, 0.05);
  bool saw_stage2 = false;
  for (double y = 0.0; y < 0.5 && !saw_stage2; y += 0.001) {
    auto st = try_two_collision({0.0, y}, p);
    if (!st.ok() && st.stage == 2) saw_stage2 = true;
  }
  EXPECT_TRUE(saw_stage2);
}

TEST(Identities, SuitesPass) {
  for (const auto& res : {check_composition(2000, 1), check_invariant_line(2000, 2),
                          check_hybrid_conjugacy(2000, 3), check_symmetric_is_T1(2000, 4)}) {
    EXPECT_TRUE(res.pass) << res.name << " max error " << res.max_error << " " << res.detail;
  }
}

TEST(RelevantDomain, PhiAboveAlphaGoesNegative) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double r = 0.01 + 0.2 * u(rng), alpha = 0.3 + 0.6 * u(rng);
    auto p = MapParams::from_bT(r, alpha, 0.3 + u(rng), 0.5 + u(rng));
    ReducedState s{alpha + 0.01 + u(rng), 0.5 * u(rng) / (2 * p.b)};
    auto st = try_one_collision(s, p.r, p.alpha, p.b, p.T);
    if (!st.ok()) continue;
    EXPECT_LT(st.s.phi1, 0.0);
  }
}

TEST(Hybrid, Conversions) {
  EXPECT_EQ(to_hybrid({0.2, 0.0}, 1.0).w, 0.0);
  EXPECT_DOUBLE_EQ(to_hybrid({0.2, 0.5}, 1.0).w, 1.0);
  EXPECT_DOUBLE_EQ(to_hybrid({0.2, 0.25}, 2.0).w, 1.0);
  EXPECT_DOUBLE_EQ(from_hybrid({0.0, 0.5}, 1.0).phi2, 0.375);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double b = 0.1 + 3 * u(rng);
    ReducedState s{u(rng), u(rng) / (2 * b)};
    auto back = from_hybrid(to_hybrid(s, b), b);
    EXPECT_NEAR(back.phi2, s.phi2, 1e-14 * std::max(1.0, s.phi2));
    EXPECT_EQ(back.phi1, s.phi1);
  }
  EXPECT_THROW(to_hybrid({0.0, 0.6}, 1.0), Error);
}

TEST(Hybrid, MapExamples) {
  auto up = symmetric_map_hybrid({0.0, 1.0}, kP);
  EXPECT_EQ(up.phi1, 0.0);
  EXPECT_DOUBLE_EQ(up.phi2, 0.5);
  auto ax = symmetric_map_hybrid({0.2, 0.0}, kP);
  EXPECT_NEAR(ax.phi1, 0.05 / (0.525 - 0.2), 1e-15);
  EXPECT_EQ(ax.phi2, 0.0);
}

TEST(SymmetricMap, PUpFixedAndT1) {
  for (double b : {1.0, 2.0}) {
    auto p = MapParams::symmetric(0.05, 0.525, b);
    auto s = symmetric_map({0.0, 1.0 / (2 * b)}, p);
    EXPECT_NEAR(s.phi1, 0.0, 1e-14);
    EXPECT_NEAR(s.phi2, 1.0 / (2 * b), 1e-14);
  }
  auto a = symmetric_map({0.2, 0.0}, kP);
  auto b = one_collision({0.2, 0.0}, kP);
  EXPECT_EQ(a.phi1, b.phi1);
}

TEST(LowEnergy, Examples) {
  auto z = low_energy_map({0.7, 0.0}, 0.21, 0.9);
  EXPECT_EQ(z.Y, 0.0);
  auto x0 = low_energy_map({0.0, 1.0}, 0.21, 0.9);
  EXPECT_NEAR(x0.X, 0.21 / 0.79, 1e-15);
  EXPECT_NEAR(x0.X, 0.2658228, 1e-7);
  auto m = low_energy_map({0.3, 2.0}, 0.21, 0.9);
  EXPECT_NEAR(m.X, 0.3, 1e-15);
  auto eq = low_energy_equilibria(0.21, 0.9);
  ASSERT_TRUE(eq.C);
  EXPECT_NEAR(m.Y, *eq.C * 2.0, 1e-14);
  EXPECT_THROW(low_energy_map({1.0, 1.0}, 0.21, 0.9), Error);
  EXPECT_THROW(low_energy_map({0.79, 1.0}, 0.21, 0.9), Error);
}

TEST(LowEnergy, XRecursionMatchesAxisRecursion) {
  // With X = phi1/alpha and R = r/alpha^2 the X map is the phi2 = 0 two-collision map.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double r = 0.01 + 0.1 * u(rng), alpha = 0.5 + 0.45 * u(rng);
    const double R = r / (alpha * alpha);
    const double x = 0.8 * alpha * u(rng);
    auto st = try_two_collision({x, 0.0}, MapParams::from_bT(r, alpha, 0.7, 1.3));
    auto le = try_low_energy_map({x / alpha, 0.0}, R, alpha);
    if (!st.ok() || !le.ok()) continue;
    EXPECT_NEAR(st.s.phi1 / alpha, le.s.X, 1e-12 * std::max(1.0, std::abs(le.s.X)));
  }
}

TEST(LowEnergy, LimitConsistencyShrinksLinearly) {
  auto rep = low_energy_limit_consistency(0.21, 0.9, 0.5, {1e-2, 1e-3, 1e-4});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_TRUE(rep.decreasing);
  EXPECT_TRUE(rep.linear);
  for (double ratio : rep.decade_ratios) EXPECT_GE(ratio, 8.0);
  // Samples above X = 1 - R are reported, not compared.
  EXPECT_EQ(rep.rows[0].non_comparable, 0);
  ConsistencyBox wide;
  wide.X_hi = 0.95;
  auto w = low_energy_limit_consistency(0.21, 0.9, 0.5, {1e-2, 1e-3}, wide);
  EXPECT_GT(w.rows[0].non_comparable, 0);
  EXPECT_GT(w.rows[0].compared, 0);
}

TEST(Partials, MatchFiniteDifferences) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double r = 0.01 + 0.2 * u(rng), alpha = 0.3 + 0.6 * u(rng);
    const double b = 0.3 + 1.5 * u(rng), T = 0.4 + 2 * u(rng);
    ReducedState s{0.4 * alpha * u(rng), 0.3 * u(rng) / (2 * b)};
    const auto an = one_collision_partials(s, r, alpha, b, T);
    const double h = 1e-6;
    auto f = [&](double x, double y) { return try_one_collision({x, y}, r, alpha, b, T).s; };
    const auto xp = f(s.phi1 + h, s.phi2), xm = f(s.phi1 - h, s.phi2);
    const auto yp = f(s.phi1, s.phi2 + h), ym = f(s.phi1, s.phi2 - h);
    const double scale = 1.0 + std::abs(an.dx_f1) + std::abs(an.dy_f1) + std::abs(an.dx_f2) +
                         std::abs(an.dy_f2);
    EXPECT_NEAR(an.dx_f1, (xp.phi1 - xm.phi1) / (2 * h), 1e-5 * scale);
    EXPECT_NEAR(an.dy_f1, (yp.phi1 - ym.phi1) / (2 * h), 1e-5 * scale);
    EXPECT_NEAR(an.dx_f2, (xp.phi2 - xm.phi2) / (2 * h), 1e-5 * scale);
    EXPECT_NEAR(an.dy_f2, (yp.phi2 - ym.phi2) / (2 * h), 1e-5 * scale);
  }
}
