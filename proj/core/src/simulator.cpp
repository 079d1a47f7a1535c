#include "collapse/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace collapse {

std::string_view to_string(StopReason s) noexcept {
  switch (s) {
    case StopReason::MaxEvents: return "MaxEvents";
    case StopReason::MaxTime: return "MaxTime";
    case StopReason::ZenoCutoff: return "ZenoCutoff";
    case StopReason::NoCollision: return "NoCollision";
  }
  return "Unknown";
}

std::string_view to_string(PatternKind k) noexcept {
  switch (k) {
    case PatternKind::NearlyLinear: return "NearlyLinear";
    case PatternKind::Triangular: return "Triangular";
    case PatternKind::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

namespace {

constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

std::pair<int, int> normalized(std::pair<int, int> p) {
  if (p.first > p.second) std::swap(p.first, p.second);
  return p;
}

int common_index(std::pair<int, int> a, std::pair<int, int> b) {
  if (a.first == b.first || a.first == b.second) return a.first;
  if (a.second == b.first || a.second == b.second) return a.second;
  return -1;
}

// Index of the first element of the longest suffix with p[k] == p[k - period].
std::size_t periodic_onset(const std::vector<std::pair<int, int>>& p, std::size_t period) {
  std::size_t k = p.size() - 1;
  while (k >= period && p[k] == p[k - period]) --k;
  // p[k+1..] satisfies the relation; the suffix starts period entries earlier.
  return k + 1 >= period ? k + 1 - period : 0;
}

}  // namespace

PatternReport detect_pattern(const std::vector<std::pair<int, int>>& raw, std::size_t window) {
  window = std::max<std::size_t>(window, 6);
  PatternReport rep;
  if (raw.size() < window) return rep;

  std::vector<std::pair<int, int>> p;
  p.reserve(raw.size());
  for (auto q : raw) p.push_back(normalized(q));

  const std::size_t n = p.size();
  const std::size_t start = n - window;
  auto holds = [&](std::size_t period) {
    for (std::size_t k = start + period; k < n; ++k)
      if (p[k] != p[k - period]) return false;
    return true;
  };

  if (holds(2) && p[n - 1] != p[n - 2]) {
    int c = common_index(p[n - 1], p[n - 2]);
    if (c >= 0) {
      rep.kind = PatternKind::NearlyLinear;
      rep.central = c;
      rep.onset = periodic_onset(p, 2);
      return rep;
    }
  }
  if (holds(3) && p[n - 1] != p[n - 2] && p[n - 2] != p[n - 3] && p[n - 1] != p[n - 3]) {
    rep.kind = PatternKind::Triangular;
    rep.onset = periodic_onset(p, 3);
  }
  return rep;
}

template <class Real>
PatternReport detect_pattern(const std::vector<CollisionEvent<Real>>& events, std::size_t window) {
  std::vector<std::pair<int, int>> p;
  p.reserve(events.size());
  for (const auto& e : events) p.emplace_back(e.i, e.j);
  return detect_pattern(p, window);
}

template <class Real>
std::optional<NextCollision<Real>> next_collision(const ParticleSystem<Real>& sys) {
  using std::sqrt;
  std::optional<NextCollision<Real>> best;
  for (auto [i, j] : kPairs) {
    Vec<Real> dx = sys.x[i] - sys.x[j];
    Vec<Real> dv = sys.v[i] - sys.v[j];
    Real b = dot(dx, dv);
    if (!(b < Real(0))) continue;  // receding or static
    Real a = norm2(dv);
    Real c = norm2(dx) - Real(1);
    Real disc = b * b - a * c;
    if (disc <= Real(kGrazingRelDisc) * b * b) continue;
    // Smaller root of a t^2 + 2 b t + c = 0 in the cancellation-free form.
    Real t = c / (-b + sqrt(disc));
    if (t < Real(0)) t = Real(0);
    if (!best || t < best->t) best = NextCollision<Real>{i, j, t};
  }
  return best;
}

template <class Real>
std::vector<ReducedTraceEntry<Real>> extract_reduced_trace(
    const std::vector<CollisionEvent<Real>>& events, const PatternReport& pattern) {
  if (pattern.kind != PatternKind::NearlyLinear || pattern.central < 0)
    throw Error(Errc::PatternMismatch, "reduced trace needs a nearly-linear pattern");
  std::vector<ReducedTraceEntry<Real>> out;
  const int c = pattern.central;
  for (std::size_t k = pattern.onset; k < events.size(); ++k) {
    const auto& e = events[k];
    if (e.i != c && e.j != c) continue;
    ParticleSystem<Real> s;
    s.dim = static_cast<int>(e.x[0].size());
    s.x = e.x;
    s.v = e.v;
    int contact = e.i == c ? e.j : e.i;
    int spectator = 3 - c - contact;
    Extraction<Real> ex = extract_collision_config(s, c, contact, spectator);
    const auto& cfg = ex.cfg;

    ReducedTraceEntry<Real> t;
    t.event_index = k;
    t.contact = contact;
    t.spectator = spectator;
    t.eta1 = cfg.eta1();
    t.eta2 = cfg.eta2();
    t.gap = cfg.gap;
    t.tau = k + 1 < events.size() ? events[k + 1].tau : Real(0);
    t.cos_theta = static_cast<double>(dot(cfg.omega1, cfg.omega2));
    t.w1sq = static_cast<double>(norm2(cfg.W1));
    t.w2sq = static_cast<double>(norm2(cfg.W2));
    t.defined = t.eta2 < Real(0);
    if (t.defined) {
      t.phi1 = static_cast<double>(t.eta1 / (-t.eta2));
      t.phi2 = static_cast<double>(t.gap / (t.eta2 * t.eta2));
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

template <class Real>
std::optional<Real> tail_extrapolation(const std::vector<Real>& tau, const Real& now) {
  using std::log;
  using std::exp;
  constexpr std::size_t kRatios = 10;
  if (tau.size() < kRatios + 1) return std::nullopt;
  Real log_sum(0);
  for (std::size_t k = tau.size() - kRatios; k < tau.size(); ++k) {
    if (!(tau[k] > Real(0) && tau[k - 1] > Real(0))) return std::nullopt;
    log_sum += log(tau[k] / tau[k - 1]);
  }
  Real rho = exp(log_sum / Real(static_cast<double>(kRatios)));
  if (!(rho < Real(1))) return std::nullopt;
  return now + tau.back() * rho / (Real(1) - rho);
}

}  // namespace

template <class Real>
RunResult<Real> run(const ParticleSystem<Real>& initial, const StopCriteria& stop,
                    std::size_t pattern_window) {
  initial.validate();
  RunResult<Real> res;
  ParticleSystem<Real> sys = initial;
  const Real overlap_floor = Real(1) - Real(10.0 * kTolOverlap);
  const Real max_time = std::isinf(stop.max_time) ? Real(-1) : Real(stop.max_time);
  const Real min_gap(stop.min_gap);
  res.reason = StopReason::MaxEvents;

  while (res.events.size() < stop.max_events) {
    auto nc = next_collision(sys);
    if (!nc) {
      res.reason = StopReason::NoCollision;
      break;
    }
    if (max_time >= Real(0) && sys.time + nc->t > max_time) {
      Real dt = max_time - sys.time;
      for (int k = 0; k < 3; ++k) sys.x[k] += dt * sys.v[k];
      sys.time = max_time;
      res.reason = StopReason::MaxTime;
      break;
    }
    for (int k = 0; k < 3; ++k) sys.x[k] += nc->t * sys.v[k];
    sys.time += nc->t;

    for (auto [a, b] : kPairs) {
      if (norm(sys.x[a] - sys.x[b]) < overlap_floor)
        throw Error(Errc::NumericalOverlap, "spheres " + std::to_string(a) + " and " +
                                                std::to_string(b) + " interpenetrate at t = " +
                                                format_real(sys.time));
    }

    const int i = nc->i;
    const int j = nc->j;
    Vec<Real> rel = sys.x[j] - sys.x[i];
    Vec<Real> omega = rel / norm(rel);
    Real pre = dot(sys.v[i] - sys.v[j], omega);
    auto [vi, vj] = apply_collision_law(sys.v[i], sys.v[j], omega, sys.r);
    Real post = dot(vi - vj, omega);
    if (!(post < Real(0)) && pre > Real(0)) {
      // Rounding left the pair approaching; restore the restitution law.
      Real fix = (post + sys.r * pre) / Real(2);
      vi -= fix * omega;
      vj += fix * omega;
      post = dot(vi - vj, omega);
      ++res.nudges;
    }
    sys.v[i] = std::move(vi);
    sys.v[j] = std::move(vj);

    CollisionEvent<Real> ev;
    ev.time = sys.time;
    ev.i = std::min(i, j);
    ev.j = std::max(i, j);
    ev.pre_normal_speed = pre;
    ev.post_normal_speed = post;
    ev.tau = res.events.empty() ? sys.time - initial.time : nc->t;
    ev.x = sys.x;
    ev.v = sys.v;
    const bool zeno = !res.events.empty() && stop.min_gap > 0.0 && nc->t < min_gap;
    res.events.push_back(std::move(ev));
    if (zeno) {
      res.reason = StopReason::ZenoCutoff;
      break;
    }
  }

  res.final_state = sys;
  auto& dg = res.diagnostics;
  dg.n_collisions = res.events.size();
  dg.tau_seq.reserve(res.events.size());
  for (const auto& e : res.events) dg.tau_seq.push_back(e.tau);
  dg.pattern = detect_pattern(res.events, pattern_window);
  if (dg.pattern.kind == PatternKind::NearlyLinear) {
    for (const auto& t : extract_reduced_trace(res.events, dg.pattern)) {
      dg.eta1_seq.push_back(t.eta1);
      dg.eta2_seq.push_back(t.eta2);
      dg.d_seq.push_back(t.gap);
    }
  }
  if (res.reason == StopReason::ZenoCutoff || dg.pattern.kind != PatternKind::Undetermined) {
    // Skip the first event: its tau is measured from the initial time.
    std::vector<Real> gaps(dg.tau_seq.begin() + (dg.tau_seq.empty() ? 0 : 1), dg.tau_seq.end());
    dg.estimated_tau_star = tail_extrapolation(gaps, sys.time);
  }
  return res;
}

#define COLLAPSE_INSTANTIATE(Real)                                                              \
  template PatternReport detect_pattern(const std::vector<CollisionEvent<Real>>&, std::size_t); \
  template std::optional<NextCollision<Real>> next_collision(const ParticleSystem<Real>&);      \
  template std::vector<ReducedTraceEntry<Real>> extract_reduced_trace(                          \
      const std::vector<CollisionEvent<Real>>&, const PatternReport&);                          \
  template RunResult<Real> run(const ParticleSystem<Real>&, const StopCriteria&, std::size_t);

COLLAPSE_INSTANTIATE(double)
COLLAPSE_INSTANTIATE(HighReal)

}  // namespace collapse
