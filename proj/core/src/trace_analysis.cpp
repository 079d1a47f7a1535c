#include "collapse/trace_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "collapse/equilibria.hpp"

namespace collapse {

template <class Real>
TraceLimits estimate_trace_limits(const std::vector<ReducedTraceEntry<Real>>& trace, double r) {
  TraceLimits lim;
  if (trace.empty()) throw Error(Errc::PatternMismatch, "empty reduced trace");
  lim.contact = trace.back().contact;
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (it->contact != lim.contact || !it->defined) continue;
    lim.cos_theta_bar = it->cos_theta;
    const double alpha = (1.0 + r) / 2.0 * (-it->cos_theta);
    lim.params = MapParams::from_ab(r, alpha, it->w1sq, it->w2sq);
    return lim;
  }
  throw Error(Errc::PatternMismatch, "no defined trace entry for the limiting parameters");
}

template <class Real>
CollapseAnalysis analyze_collapse(const RunResult<Real>& run, double r, std::size_t transient) {
  using std::abs;
  using std::exp;
  using std::log;
  CollapseAnalysis out;
  const auto& dg = run.diagnostics;
  out.n_collisions = dg.n_collisions;
  out.pattern = dg.pattern.kind;
  out.tau_sum = static_cast<double>(run.final_state.time);
  if (dg.pattern.kind != PatternKind::NearlyLinear) return out;

  const auto trace = extract_reduced_trace(run.events, dg.pattern);
  out.trace_length = trace.size();
  if (trace.size() < 4) return out;

  // Inter-collision times: geometric tail of the last 20 gaps.
  const auto& tau = dg.tau_seq;
  if (tau.size() >= 3) {
    const std::size_t m = std::min<std::size_t>(20, tau.size() - 2);
    Real log_sum(0);
    for (std::size_t k = tau.size() - m; k < tau.size(); ++k) log_sum += log(tau[k] / tau[k - 1]);
    const Real rho = exp(log_sum / Real(static_cast<double>(m)));
    out.tau_ratio = static_cast<double>(rho);
    if (rho < Real(1)) {
      const Real tail = tau.back() * rho / (Real(1) - rho);
      out.tau_tail_estimate = static_cast<double>(tail);
      out.tau_sum_convergent = tail <= Real(1e-12) * run.final_state.time;
    }
  }

  // Per-collision decay of |eta2| over the second half of the trace.
  const std::size_t half = trace.size() / 2;
  {
    Real log_sum(0);
    std::size_t cnt = 0;
    for (std::size_t k = half + 1; k < trace.size(); ++k) {
      if (trace[k].eta2 == Real(0) || trace[k - 1].eta2 == Real(0)) continue;
      log_sum += log(abs(trace[k].eta2 / trace[k - 1].eta2));
      ++cnt;
    }
    if (cnt > 0) out.eta_rate = static_cast<double>(exp(log_sum / Real(static_cast<double>(cnt))));
  }

  out.limits = estimate_trace_limits(trace, r);
  const MapParams& p = out.limits.params;
  out.eta_rate_bound = std::max((1.0 + r) / 2.0 * std::abs(out.limits.cos_theta_bar), r);
  BoundaryFixedPoints bf = boundary_fixed_points(r, p.alpha);
  if (bf.phi_minus) out.phi_minus = *bf.phi_minus;

  std::vector<const ReducedTraceEntry<Real>*> seq;
  for (const auto& e : trace)
    if (e.contact == out.limits.contact && e.defined) seq.push_back(&e);
  if (!seq.empty()) out.phi1_last = seq.back()->phi1;
  for (std::size_t k = transient; k + 1 < seq.size(); ++k) {
    MapStep st = try_two_collision({seq[k]->phi1, seq[k]->phi2}, p);
    if (!st.ok()) {
      out.tracking_err_phi1 = out.tracking_err_phi2 = HUGE_VAL;
      continue;
    }
    const auto& nx = *seq[k + 1];
    out.tracking_err_phi1 =
        std::max(out.tracking_err_phi1, std::abs(st.s.phi1 - nx.phi1) / std::abs(nx.phi1));
    if (nx.phi2 > 1e-290)
      out.tracking_err_phi2 =
          std::max(out.tracking_err_phi2, std::abs(st.s.phi2 - nx.phi2) / nx.phi2);
    ++out.tracked_steps;
  }

  for (std::size_t k = half; k < trace.size(); ++k) {
    const auto& e = trace[k];
    if (!e.defined) continue;
    out.max_phi2_tail = std::max(out.max_phi2_tail, e.phi2);
    if (e.tau > Real(0))
      out.max_tau_over_eta = std::max(out.max_tau_over_eta, static_cast<double>(e.tau / abs(e.eta2)));
  }
  return out;
}

#define COLLAPSE_INSTANTIATE(Real)                                                             \
  template TraceLimits estimate_trace_limits(const std::vector<ReducedTraceEntry<Real>>&,      \
                                             double);                                          \
  template CollapseAnalysis analyze_collapse(const RunResult<Real>&, double, std::size_t);

COLLAPSE_INSTANTIATE(double)
COLLAPSE_INSTANTIATE(HighReal)

}  // namespace collapse
