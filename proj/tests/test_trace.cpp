#include <gtest/gtest.h>

#include <cmath>

#include "collapse/crosscheck.hpp"
#include "collapse/equilibria.hpp"
#include "collapse/trace_analysis.hpp"

using namespace collapse;

namespace {

const RunResult<HighReal>& collapse_run() {
  static const RunResult<HighReal> res = [] {
    StopCriteria stop;
    stop.max_events = 220;
    stop.min_gap = 0.0;
    return run(scripted_collapse_datum(0.02), stop);
  }();
  return res;
}

}  // namespace

TEST(Collapse, NearlyLinearWithShrinkingGaps) {
  const auto& res = collapse_run();
  ASSERT_EQ(res.events.size(), 220u);
  EXPECT_EQ(res.diagnostics.pattern.kind, PatternKind::NearlyLinear);
  EXPECT_EQ(res.diagnostics.pattern.central, 1);
  const auto& tau = res.diagnostics.tau_seq;
  // Decreasing in trend: every block of ten events ends below where it started.
  for (std::size_t k = 40; k + 10 < tau.size(); k += 10) EXPECT_LT(tau[k + 10], tau[k]);
  EXPECT_LT(tau.back(), HighReal(1e-100));
}

TEST(Collapse, DiagnosticsSequencesConsistent) {
  const auto& dg = collapse_run().diagnostics;
  EXPECT_EQ(dg.n_collisions, 220u);
  EXPECT_EQ(dg.tau_seq.size(), dg.n_collisions);
  EXPECT_EQ(dg.eta1_seq.size(), dg.eta2_seq.size());
  EXPECT_EQ(dg.eta1_seq.size(), dg.d_seq.size());
  for (std::size_t k = 1; k < dg.tau_seq.size(); ++k) EXPECT_GT(dg.tau_seq[k], HighReal(0));
}

TEST(Collapse, ConservesMomentum) {
  const auto& res = collapse_run();
  const auto p0 = scripted_collapse_datum(0.02).momentum();
  const auto p1 = res.final_state.momentum();
  EXPECT_LT(static_cast<double>(max_abs_diff(p0, p1)), 1e-30);
}

TEST(Collapse, TraceAnalysis) {
  const auto& res = collapse_run();
  auto an = analyze_collapse(res, 0.02);
  EXPECT_TRUE(an.tau_sum_convergent);
  EXPECT_LT(an.tau_ratio, 1.0);
  EXPECT_LE(an.eta_rate, an.eta_rate_bound + 0.1);
  EXPECT_GT(an.tracked_steps, 50u);
  EXPECT_LT(an.tracking_err_phi1, 0.1);
  EXPECT_LT(an.tracking_err_phi2, 0.1);
  // phi1 settles at the stable boundary fixed point of the limiting map.
  EXPECT_NEAR(an.phi1_last / an.phi_minus, 1.0, 0.05);
  // Asymptotic comparisons: bounded d/eta2^2 and tau/|eta2|.
  EXPECT_LT(an.max_phi2_tail, 1.0);
  EXPECT_LT(an.max_tau_over_eta, 100.0);
}

TEST(Collapse, GapOrderEtaTau) {
  // d' = O(eta1 tau) along the suffix.
  const auto& res = collapse_run();
  auto trace = extract_reduced_trace(res.events, res.diagnostics.pattern);
  double worst = 0;
  for (std::size_t k = trace.size() / 2; k + 1 < trace.size(); ++k) {
    const auto& e = trace[k];
    if (e.tau == HighReal(0)) continue;
    const double q = static_cast<double>(trace[k + 1].gap / (e.eta1 * e.tau));
    worst = std::max(worst, std::abs(q));
  }
  EXPECT_LT(worst, 10.0);
}
