#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "collapse/phase_analysis.hpp"

using namespace collapse;

namespace {

const MapParams kP = MapParams::from_bT(0.05, 0.525, 1.0, 1.0);

}  // namespace

TEST(Classify, Examples) {
  auto at = classify_orbit({0.125, 0.0}, kP);
  EXPECT_EQ(at.kind, OrbitKind::ConvergedToPMinus);
  EXPECT_LE(at.steps, ClassifyLimits{}.K);

  auto out = classify_orbit({0.525 + 0.1, 0.01}, kP);
  EXPECT_EQ(out.kind, OrbitKind::LeftDomain);
  EXPECT_LE(out.steps, 2);

  auto near = classify_orbit({0.125, 1e-3}, kP);
  EXPECT_EQ(near.kind, OrbitKind::ConvergedToPMinus);

  auto bad = classify_orbit({0.1, 0.6}, kP);
  EXPECT_EQ(bad.kind, OrbitKind::IllDefined);
}

TEST(Classify, AxisBelowPhiPlusConverges) {
  for (int k = 0; k < 200; ++k) {
    const double x = 0.4 * k / 200.0;
    EXPECT_EQ(classify_orbit({x, 0.0}, kP).kind, OrbitKind::ConvergedToPMinus) << x;
  }
  // Beyond phi+ the axis orbit leaves the first quadrant.
  EXPECT_EQ(classify_orbit({0.45, 0.0}, kP).kind, OrbitKind::LeftDomain);
}

TEST(Classify, UndecidedWhenStepBudgetRunsOut) {
  ClassifyLimits lim;
  lim.max_steps = 3;
  EXPECT_EQ(classify_orbit({0.01, 1e-3}, kP, lim).kind, OrbitKind::Undecided);
}

TEST(Sweep, CoarseGridHasBasinAroundPMinus) {
  GridSpec g{{0.0, 0.525, 50, true}, {0.0, 0.5, 50, true}};
  auto grid = sweep(g, kP, ClassifyLimits{}, 2);
  ASSERT_EQ(grid.cells.size(), 2500u);
  // Cell containing (phi-, 0).
  std::size_t i = 0;
  while (i + 1 < grid.phi1_axis.size() && grid.phi1_axis[i + 1] <= 0.125) ++i;
  EXPECT_EQ(grid.at(i, 0).kind, OrbitKind::ConvergedToPMinus);
  // Top row near phi1 = alpha is outside the relevant domain.
  const std::size_t top = grid.phi2_axis.size() - 2;
  EXPECT_NE(grid.at(grid.phi1_axis.size() - 1, top).kind, OrbitKind::ConvergedToPMinus);
  // Converged cells lie under the necessary bound.
  for (std::size_t j = 0; j < grid.phi2_axis.size(); ++j)
    for (std::size_t k = 0; k < grid.phi1_axis.size(); ++k)
      if (grid.at(k, j).kind == OrbitKind::ConvergedToPMinus)
        EXPECT_LE(grid.phi2_axis[j], necessary_domain_bound(grid.phi1_axis[k], kP) + 1e-12);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  GridSpec g{{0.0, 0.5, 24, true}, {0.0, 0.1, 16, true}};
  std::ostringstream a, b;
  write_grid_csv(a, sweep(g, kP, ClassifyLimits{}, 1));
  write_grid_csv(b, sweep(g, kP, ClassifyLimits{}, 4));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("phi1,phi2,class,steps\n", 0), 0u);
}

TEST(NecessaryBound, ValueAndMonotone) {
  EXPECT_NEAR(necessary_domain_bound(0.0, kP), 0.5 * (1 - 0.275625 / 2.175625), 1e-15);
  EXPECT_NEAR(necessary_domain_bound(0.0, kP), 0.4366558, 1e-6);
  double prev = necessary_domain_bound(0.0, kP);
  for (int k = 1; k <= 100; ++k) {
    const double v = necessary_domain_bound(0.525 * k / 100.0, kP);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(Separatrix, ColumnAtPhiPlusIsOnAxis) {
  SeparatrixOptions opt;
  opt.bracket_width = 1e-6;
  auto est = estimate_separatrix(kP, {0.05, 0.2, 0.35}, opt);
  ASSERT_TRUE(est.axis_intercept);
  EXPECT_NEAR(*est.axis_intercept, 0.4, 1e-3);
  ASSERT_EQ(est.columns.size(), 3u);
  for (const auto& c : est.columns) EXPECT_LE(c.phi2_high - c.phi2_low, 1e-6);
  EXPECT_EQ(est.monotonic_violations, 0);
  EXPECT_GT(est.columns[0].Phi(), est.columns[1].Phi());
  EXPECT_GT(est.columns[1].Phi(), est.columns[2].Phi());
  // Brackets are honest: low converges, high does not.
  for (const auto& c : est.columns) {
    EXPECT_EQ(classify_orbit({c.phi1, c.phi2_low}, kP).kind, OrbitKind::ConvergedToPMinus);
    EXPECT_NE(classify_orbit({c.phi1, c.phi2_high}, kP).kind, OrbitKind::ConvergedToPMinus);
  }
  auto mid = separatrix_at(est, 0.1);
  ASSERT_TRUE(mid);
  EXPECT_LT(*mid, est.columns[0].Phi());
  EXPECT_GT(*mid, est.columns[1].Phi());
  EXPECT_FALSE(separatrix_at(est, 0.01));
}

TEST(Separatrix, PUpColumnInterceptIsEstimated) {
  // For this map the phi1 = 0 column crosses far below 1/(2b).
  SeparatrixOptions opt;
  auto col = separatrix_column(0.0, kP, opt);
  EXPECT_GT(col.Phi(), 0.01);
  EXPECT_LT(col.Phi(), 0.5);
}

TEST(Separatrix, NoBracketAboveAlpha) {
  SeparatrixOptions opt;
  try {
    separatrix_column(0.6, kP, opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoBracket);
  }
}

TEST(LowEnergySeparatrix, VerticalLineAtXPlus) {
  SeparatrixOptions opt;
  opt.bracket_width = 1e-6;
  opt.limits.blowup = 1e100;
  auto rows = estimate_low_energy_separatrix(0.21, 0.9, {0.1, 1.0, 5.0}, opt);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_LE(row.X_high - row.X_low, 1e-6);
    EXPECT_LE(row.X_low, 0.7 + 1e-6);
    EXPECT_GE(row.X_high, 0.7 - 1e-6);
  }
}

TEST(InvariantCurve, SeedsAndAxis) {
  auto near = trace_invariant_curve(kP, {0.125, 1e-2}, 2000);
  EXPECT_EQ(near.outcome.kind, OrbitKind::ConvergedToPMinus);
  const auto& last = near.points.back();
  EXPECT_LT(std::hypot(last.phi1 - 0.125, last.phi2), 1e-9);

  auto axis = trace_invariant_curve(kP, {0.3, 0.0}, 200);
  for (const auto& p : axis.points) EXPECT_EQ(p.phi2, 0.0);
}

TEST(InvariantCurve, CornerSeedMovesUpLeftDown) {
  // Just under the separatrix near p+: up, then left, then back down.
  SeparatrixOptions opt;
  auto col = separatrix_column(0.38, kP, opt);
  auto poly = trace_invariant_curve(kP, {0.38, 0.5 * col.phi2_low}, 2000);
  EXPECT_EQ(poly.outcome.kind, OrbitKind::ConvergedToPMinus);
  double ymax = 0;
  std::size_t kmax = 0;
  for (std::size_t k = 0; k < poly.points.size(); ++k)
    if (poly.points[k].phi2 > ymax) {
      ymax = poly.points[k].phi2;
      kmax = k;
    }
  EXPECT_GT(ymax, 10 * poly.points.front().phi2);
  EXPECT_LT(poly.points[kmax].phi1, 0.38);
  EXPECT_GE(count_monotone_segments(poly.points, 1, 1e-15), 2);
}

TEST(Csv, OrbitAndSeparatrixHeaders) {
  std::ostringstream o, s;
  write_orbit_csv(o, {{0.1, 0.2}, {0.3, 0.4}});
  EXPECT_EQ(o.str().substr(0, o.str().find('\n')), "step,phi1,phi2");
  SeparatrixEstimate est;
  est.columns.push_back({0.1, 0.2, 0.3});
  write_separatrix_csv(s, est);
  EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "phi1,phi2_low,phi2_high");
}
