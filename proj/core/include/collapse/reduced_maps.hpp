#pragma once

#include <string_view>
#include <vector>

#include "collapse/error.hpp"

namespace collapse {

// (r, alpha, a, b, T) with T = b / a.
struct MapParams {
  double r = 0.05;
  double alpha = 0.525;
  double a = 1.0;
  double b = 1.0;
  double T = 1.0;

  static MapParams from_ab(double r, double alpha, double a, double b);
  static MapParams from_bT(double r, double alpha, double b, double T);
  static MapParams symmetric(double r, double alpha, double b = 1.0);
  // alpha = (1 + r)/2 * (-cos theta).
  static double alpha_from_angle(double r, double theta);

  // Throws InvalidArgument.
  void validate() const;
};

struct ReducedState {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

struct HybridState {
  double x = 0.0;
  double w = 0.0;
};

struct LowEnergyState {
  double X = 0.0;
  double Y = 0.0;
};

inline constexpr double kSingularDenominator = 1e-14;

enum class MapStatus { Ok, SqrtDomain, SingularDenominator };
std::string_view to_string(MapStatus s) noexcept;

// Non-throwing step result; stage is 1 or 2 for the two halves of the
// two-collision mapping (always 1 for single-collision maps).
struct MapStep {
  ReducedState s;
  ReducedState mid;  // state after the first collision of a two-collision step
  MapStatus status = MapStatus::Ok;
  int stage = 0;

  bool ok() const noexcept { return status == MapStatus::Ok; }
};

// One collision with parameters (b, T). The second half of the two-collision
// map is the same call with (b/T, 1/T).
MapStep try_one_collision(ReducedState s, double r, double alpha, double b, double T);
MapStep try_two_collision(ReducedState s, const MapParams& p);
MapStep try_symmetric_map(ReducedState s, const MapParams& p);

// Throwing forms: SqrtDomain or SingularDenominator.
ReducedState one_collision(ReducedState s, const MapParams& p);
ReducedState two_collision(ReducedState s, const MapParams& p);
ReducedState symmetric_map(ReducedState s, const MapParams& p);

HybridState to_hybrid(ReducedState s, double b);
ReducedState from_hybrid(HybridState h, double b);

// Returns (x', y') in the original coordinates.
ReducedState symmetric_map_hybrid(HybridState h, const MapParams& p);

struct LowEnergyStep {
  LowEnergyState s;
  MapStatus status = MapStatus::Ok;
  bool ok() const noexcept { return status == MapStatus::Ok; }
};

LowEnergyStep try_low_energy_map(LowEnergyState s, double R, double alpha);
LowEnergyState low_energy_map(LowEnergyState s, double R, double alpha);

// Partial derivatives of a single collision map (r, alpha, b, T) at (x, y).
struct OneCollisionPartials {
  double dx_f1 = 0.0;
  double dy_f1 = 0.0;
  double dx_f2 = 0.0;
  double dy_f2 = 0.0;
};
OneCollisionPartials one_collision_partials(ReducedState s, double r, double alpha, double b,
                                            double T);

struct ConsistencyBox {
  double X_lo = 0.0;
  double X_hi = 0.6;
  double Y_lo = 0.0;
  double Y_hi = 1.0;
  int nX = 61;
  int nY = 51;
};

struct ConsistencyRow {
  double eps = 0.0;
  double gap = 0.0;      // sup-norm over comparable samples
  int compared = 0;
  int non_comparable = 0;  // either map undefined or X above 1 - R
};

struct ConsistencyReport {
  double R = 0.0;
  double alpha = 0.0;
  double T = 1.0;
  std::vector<ConsistencyRow> rows;
  std::vector<double> decade_ratios;  // gap shrink factor per decade of eps
  bool linear = false;                // every ratio >= 8
  bool decreasing = false;
};

// Compares two_collision at b = eps (X = phi1/alpha, Y = phi2) with the
// low-energy map on a grid of the box.
ConsistencyReport low_energy_limit_consistency(double R, double alpha, double T,
                                               const std::vector<double>& eps_list,
                                               const ConsistencyBox& box = {});

}  // namespace collapse
