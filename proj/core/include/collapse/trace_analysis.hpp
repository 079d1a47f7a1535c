#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "collapse/reduced_maps.hpp"
#include "collapse/simulator.hpp"

namespace collapse {

// Limiting reduced-map parameters read off the end of a nearly-linear trace.
struct TraceLimits {
  int contact = -1;          // entries with this contact form the two-collision sequence
  double cos_theta_bar = 0.0;
  MapParams params;
};

struct CollapseAnalysis {
  std::size_t n_collisions = 0;
  PatternKind pattern = PatternKind::Undetermined;
  std::size_t trace_length = 0;

  // Inter-collision times over the tail.
  double tau_ratio = 1.0;            // geometric mean of tau_{n+1}/tau_n
  double tau_sum = 0.0;              // elapsed time of the run
  double tau_tail_estimate = 0.0;    // geometric remainder after the last event
  bool tau_sum_convergent = false;

  double eta_rate = 1.0;             // per-collision geometric decay of |eta2|
  double eta_rate_bound = 0.0;       // max((1+r)/2 |cos theta_bar|, r)

  TraceLimits limits;
  double phi1_last = 0.0;
  double phi_minus = 0.0;            // boundary fixed point at the limiting alpha

  std::size_t tracked_steps = 0;     // two-collision predictions compared
  double tracking_err_phi1 = 0.0;    // max relative one-step error after transient
  double tracking_err_phi2 = 0.0;

  double max_tau_over_eta = 0.0;     // tau_n / |eta2_n| over the tail
  double max_phi2_tail = 0.0;        // d_n / eta2_n^2 over the tail
};

template <class Real>
TraceLimits estimate_trace_limits(const std::vector<ReducedTraceEntry<Real>>& trace, double r);

// transient: two-collision steps skipped before tracking errors are measured.
template <class Real>
CollapseAnalysis analyze_collapse(const RunResult<Real>& run, double r, std::size_t transient = 20);

}  // namespace collapse
