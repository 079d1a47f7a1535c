#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "collapse/crosscheck.hpp"
#include "collapse/simulator.hpp"

using namespace collapse;

namespace {

ParticleSystem<double> make2d(std::array<Vec<double>, 3> x, std::array<Vec<double>, 3> v,
                              double r) {
  ParticleSystem<double> s;
  s.dim = 2;
  s.x = std::move(x);
  s.v = std::move(v);
  s.r = r;
  return s;
}

using P = std::vector<std::pair<int, int>>;

}  // namespace

TEST(NextCollision, HeadOnGap) {
  for (double d : {1e-9, 1e-3, 0.25, 3.0}) {
    auto s = make2d({Vec<double>{0, 0}, Vec<double>{1 + d, 0}, Vec<double>{0, 50}},
                    {Vec<double>{0.5, 0}, Vec<double>{-0.5, 0}, Vec<double>{0, 0}}, 0.5);
    auto nc = next_collision(s);
    ASSERT_TRUE(nc);
    EXPECT_EQ(nc->i, 0);
    EXPECT_EQ(nc->j, 1);
    EXPECT_NEAR(nc->t, d, 1e-15 * (1 + d));
  }
}

TEST(NextCollision, StaticAndReceding) {
  auto st = make2d({Vec<double>{0, 0}, Vec<double>{2, 0}, Vec<double>{0, 2}},
                   {Vec<double>{0, 0}, Vec<double>{0, 0}, Vec<double>{0, 0}}, 0.5);
  EXPECT_FALSE(next_collision(st));
  // 0-1 receding; 1-2 approaching.
  auto rc = make2d({Vec<double>{0, 0}, Vec<double>{2, 0}, Vec<double>{4, 0}},
                   {Vec<double>{-1, 0}, Vec<double>{0, 0}, Vec<double>{-1, 0}}, 0.5);
  auto nc = next_collision(rc);
  ASSERT_TRUE(nc);
  EXPECT_EQ(nc->i, 1);
  EXPECT_EQ(nc->j, 2);
  EXPECT_NEAR(nc->t, 1.0, 1e-15);
}

TEST(DetectPattern, Examples) {
  auto nl = detect_pattern(P{{0, 1}, {0, 2}, {0, 1}, {0, 2}, {0, 1}, {0, 2}}, 6);
  EXPECT_EQ(nl.kind, PatternKind::NearlyLinear);
  EXPECT_EQ(nl.central, 0);
  EXPECT_EQ(nl.onset, 0u);
  auto tri = detect_pattern(P{{0, 1}, {0, 2}, {1, 2}, {0, 1}, {0, 2}, {1, 2}}, 6);
  EXPECT_EQ(tri.kind, PatternKind::Triangular);
  auto und = detect_pattern(P{{0, 1}, {1, 2}, {0, 1}, {0, 2}, {1, 2}, {0, 2}}, 6);
  EXPECT_EQ(und.kind, PatternKind::Undetermined);
}

TEST(DetectPattern, RelabelingAndOnset) {
  auto p = detect_pattern(P{{0, 2}, {0, 1}, {2, 1}, {1, 0}, {1, 2}, {0, 1}, {1, 2}, {1, 0}}, 6);
  EXPECT_EQ(p.kind, PatternKind::NearlyLinear);
  EXPECT_EQ(p.central, 1);
  EXPECT_EQ(p.onset, 1u);
  // Too short for the window.
  EXPECT_EQ(detect_pattern(P{{0, 1}, {0, 2}, {0, 1}}, 6).kind, PatternKind::Undetermined);
}

TEST(Run, ElasticEnergyAndMomentum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int total_events = 0;
  for (int k = 0; k < 200; ++k) {
    auto s = make2d({Vec<double>{0, 0}, Vec<double>{2.2, 0.3 * u(rng)}, Vec<double>{1.0, 2.0}},
                    {Vec<double>{u(rng), u(rng)}, Vec<double>{u(rng), u(rng)},
                     Vec<double>{u(rng), u(rng)}},
                    1.0);
    const double e0 = s.kinetic_energy();
    const auto p0 = s.momentum();
    auto res = run(s, StopCriteria{});
    total_events += static_cast<int>(res.events.size());
    EXPECT_NEAR(res.final_state.kinetic_energy(), e0, 1e-9 * e0);
    EXPECT_LE(max_abs_diff(res.final_state.momentum(), p0), 1e-10 * (1 + norm(p0)));
  }
  EXPECT_GT(total_events, 50);
}

TEST(Run, EventInvariantsInelastic) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double r = 0.05 + 0.9 * (u(rng) + 1) / 2;
    auto s = make2d({Vec<double>{-1.3, 0.1 * u(rng)}, Vec<double>{0, 0},
                     Vec<double>{1.3, 0.1 * u(rng)}},
                    {Vec<double>{1, 0.3 * u(rng)}, Vec<double>{0.2 * u(rng), 0.2 * u(rng)},
                     Vec<double>{-1, 0.3 * u(rng)}},
                    r);
    const auto p0 = s.momentum();
    auto res = run(s, StopCriteria{});
    double prev_t = 0.0;
    double prev_e = s.kinetic_energy();
    ParticleSystem<double> at = s;
    for (const auto& e : res.events) {
      EXPECT_GE(e.time, prev_t);
      EXPECT_GT(e.pre_normal_speed, 0.0);
      EXPECT_NEAR(e.post_normal_speed, -r * e.pre_normal_speed, 1e-9);
      // Sampled free flight between events keeps spheres apart.
      for (int q = 1; q < 4; ++q) {
        const double t = e.tau * q / 4.0;
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
          Vec<double> xi = at.x[i] + t * at.v[i];
          Vec<double> xj = at.x[j] + t * at.v[j];
          EXPECT_GE(norm(xi - xj), 1.0 - 1e-8);
        }
      }
      at.x = e.x;
      at.v = e.v;
      const double en = at.kinetic_energy();
      // Dissipation is quadratic in the normal speed; tiny grazes are below rounding.
      if (e.pre_normal_speed > 1e-6) EXPECT_LT(en, prev_e);
      EXPECT_LE(en, prev_e * (1 + 1e-15));
      prev_e = en;
      prev_t = e.time;
    }
    EXPECT_LE(max_abs_diff(res.final_state.momentum(), p0), 1e-10 * (1 + norm(p0)));
  }
}

TEST(Run, CollinearAboveExistenceThresholdDoesNotCollapse) {
  // r above 7 - 4 sqrt(3): the collinear three-body problem has finitely many collisions.
  for (double r : {0.075, 0.1, 0.3}) {
    auto s = make2d({Vec<double>{-1.5, 0}, Vec<double>{0, 0}, Vec<double>{1.7, 0}},
                    {Vec<double>{1, 0}, Vec<double>{0, 0}, Vec<double>{-1, 0}}, r);
    StopCriteria stop;
    stop.max_events = 100000;
    auto res = run(s, stop);
    EXPECT_EQ(res.reason, StopReason::NoCollision) << "r=" << r;
    EXPECT_LT(res.events.size(), 100000u);
  }
}

TEST(Run, ZenoCutoffExtrapolatesTauStar) {
  // Double cannot resolve the last gaps of this datum (tau rounds to 0), so
  // the cutoff is exercised on the wide type.
  auto res = run(scripted_collapse_datum(0.02), StopCriteria{});  // min_gap 1e-13
  EXPECT_EQ(res.reason, StopReason::ZenoCutoff);
  EXPECT_EQ(res.diagnostics.pattern.kind, PatternKind::NearlyLinear);
  ASSERT_TRUE(res.diagnostics.estimated_tau_star);
  const double tail = static_cast<double>(*res.diagnostics.estimated_tau_star - res.final_state.time);
  EXPECT_GT(tail, 0.0);
  EXPECT_LT(tail, 1e-13);
}

TEST(Trace, UndefinedEntryIsFlagged) {
  CollisionEvent<double> e;
  e.i = 0;
  e.j = 1;
  e.x = {Vec<double>{0, 0}, Vec<double>{1, 0}, Vec<double>{-2, 0}};
  e.v = {Vec<double>{0, 0}, Vec<double>{0.5, 0}, Vec<double>{0, 1}};
  PatternReport rep{PatternKind::NearlyLinear, 0, 0};
  auto tr = extract_reduced_trace(std::vector<CollisionEvent<double>>{e}, rep);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_FALSE(tr[0].defined);
  EXPECT_EQ(tr[0].contact, 1);
  EXPECT_EQ(tr[0].spectator, 2);
}

TEST(Trace, RequiresNearlyLinear) {
  PatternReport rep{PatternKind::Triangular, -1, 0};
  try {
    extract_reduced_trace(std::vector<CollisionEvent<double>>{}, rep);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PatternMismatch);
  }
}
