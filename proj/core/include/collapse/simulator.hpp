#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "collapse/geometry.hpp"

namespace collapse {

// Collisions whose discriminant is below this fraction of B^2 are grazing
// and skipped (B = relative position . relative velocity).
inline constexpr double kGrazingRelDisc = 1e-14;

template <class Real>
struct NextCollision {
  int i = 0;
  int j = 1;
  Real t = Real(0);
};

// Earliest future contact among the three pairs, or nullopt if none of them
// ever reaches distance 1.
template <class Real>
std::optional<NextCollision<Real>> next_collision(const ParticleSystem<Real>& sys);

struct StopCriteria {
  std::size_t max_events = 1000;
  double max_time = std::numeric_limits<double>::infinity();
  // Stop once an inter-collision time drops below this; 0 disables it.
  double min_gap = 1e-13;
};

enum class StopReason { MaxEvents, MaxTime, ZenoCutoff, NoCollision };
std::string_view to_string(StopReason s) noexcept;

template <class Real>
struct CollisionEvent {
  Real time = Real(0);
  int i = 0;
  int j = 1;
  Real pre_normal_speed = Real(0);   // approach speed, > 0
  Real post_normal_speed = Real(0);  // = -r * pre_normal_speed
  Real tau = Real(0);                // time since the previous event
  // State right after the collision.
  std::array<Vec<Real>, 3> x;
  std::array<Vec<Real>, 3> v;
};

enum class PatternKind { NearlyLinear, Triangular, Undetermined };
std::string_view to_string(PatternKind k) noexcept;

struct PatternReport {
  PatternKind kind = PatternKind::Undetermined;
  int central = -1;
  // First event index of the periodic suffix.
  std::size_t onset = 0;
};

PatternReport detect_pattern(const std::vector<std::pair<int, int>>& pairs, std::size_t window);

template <class Real>
PatternReport detect_pattern(const std::vector<CollisionEvent<Real>>& events, std::size_t window);

template <class Real>
struct CollapseDiagnostics {
  std::size_t n_collisions = 0;
  std::vector<Real> tau_seq;
  // Sampled at every event of the periodic suffix involving the central particle.
  std::vector<Real> eta1_seq;
  std::vector<Real> eta2_seq;
  std::vector<Real> d_seq;
  PatternReport pattern;
  std::optional<Real> estimated_tau_star;
};

template <class Real>
struct RunResult {
  ParticleSystem<Real> final_state;
  std::vector<CollisionEvent<Real>> events;
  CollapseDiagnostics<Real> diagnostics;
  StopReason reason = StopReason::MaxEvents;
  // Post-collision normal speeds that had to be corrected for rounding.
  std::size_t nudges = 0;
};

inline constexpr std::size_t kDefaultPatternWindow = 12;

// Event-driven flow. Throws NumericalOverlap if the scheduler lets two
// spheres interpenetrate beyond 10 * kTolOverlap.
template <class Real>
RunResult<Real> run(const ParticleSystem<Real>& sys, const StopCriteria& stop,
                    std::size_t pattern_window = kDefaultPatternWindow);

template <class Real>
struct ReducedTraceEntry {
  std::size_t event_index = 0;
  int contact = -1;
  int spectator = -1;
  bool defined = false;  // false when eta2 >= 0
  double phi1 = 0.0;
  double phi2 = 0.0;
  double cos_theta = 0.0;  // omega1 . omega2
  double w1sq = 0.0;
  double w2sq = 0.0;
  Real eta1 = Real(0);
  Real eta2 = Real(0);
  Real gap = Real(0);
  Real tau = Real(0);  // time to the next event, 0 for the last one
};

// (phi1, phi2) = (eta1/(-eta2), d/eta2^2) at every event of the nearly-linear
// suffix. Throws PatternMismatch for other patterns.
template <class Real>
std::vector<ReducedTraceEntry<Real>> extract_reduced_trace(
    const std::vector<CollisionEvent<Real>>& events, const PatternReport& pattern);

}  // namespace collapse
