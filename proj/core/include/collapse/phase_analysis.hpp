#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "collapse/equilibria.hpp"
#include "collapse/reduced_maps.hpp"

namespace collapse {

enum class OrbitKind { ConvergedToPMinus, LeftDomain, IllDefined, ConvergedToOther, Undecided };
std::string_view to_string(OrbitKind k) noexcept;

struct OrbitClass {
  OrbitKind kind = OrbitKind::Undecided;
  int steps = 0;
  ReducedState last_state;
  // |phi2_n / phi2_{n-1}| at the last step, when defined.
  std::optional<double> last_phi2_ratio;
};

struct ClassifyLimits {
  int max_steps = 2000;
  double tol_conv = 1e-10;
  int K = 3;
  double blowup = 1e6;
};

// Iterates `step` from s0 with the classification rules: map error ->
// IllDefined; negative coordinate (also in the intermediate state) or
// phi2 > blowup -> LeftDomain; K consecutive iterates within tol_conv of the
// target -> ConvergedToPMinus; K consecutive stagnating iterates elsewhere ->
// ConvergedToOther; otherwise Undecided after max_steps.
OrbitClass classify_with(const std::function<MapStep(ReducedState)>& step, ReducedState s0,
                         std::optional<ReducedState> target, const ClassifyLimits& limits);

OrbitClass classify_orbit(ReducedState s0, const MapParams& p, const ClassifyLimits& limits = {});
OrbitClass classify_low_energy(LowEnergyState s0, double R, double alpha,
                               const ClassifyLimits& limits);

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;
  bool include_hi = true;

  double at(int i) const;
  std::vector<double> values() const;
};

struct GridSpec {
  Axis phi1;
  Axis phi2;
};

enum class GridMap { TwoCollision, LowEnergy };

struct ClassificationGrid {
  GridMap map = GridMap::TwoCollision;
  std::vector<double> phi1_axis;
  std::vector<double> phi2_axis;
  // cells[j * phi1_axis.size() + i] for phi1 index i and phi2 index j.
  std::vector<OrbitClass> cells;
  MapParams params;
  double R = 0.0;  // low-energy grids only

  const OrbitClass& at(std::size_t i, std::size_t j) const {
    return cells[j * phi1_axis.size() + i];
  }
};

// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

ClassificationGrid sweep(const GridSpec& grid, const MapParams& p, const ClassifyLimits& limits,
                         int threads = 0);
// Axes are X and Y of the low-energy map.
ClassificationGrid sweep_low_energy(const GridSpec& grid, double R, double alpha,
                                    const ClassifyLimits& limits, int threads = 0);

// Necessary upper bound on phi2 for a two-collision step to stay physical.
double necessary_domain_bound(double phi1, const MapParams& p);

struct SeparatrixOptions {
  double bracket_width = 1e-6;
  int scan_points = 64;
  ClassifyLimits limits;
  int threads = 0;
};

struct SeparatrixColumn {
  double phi1 = 0.0;
  double phi2_low = 0.0;   // converges
  double phi2_high = 0.0;  // does not converge

  double Phi() const { return 0.5 * (phi2_low + phi2_high); }
};

struct SeparatrixEstimate {
  std::vector<SeparatrixColumn> columns;  // sorted by phi1
  std::vector<double> skipped;            // columns without a bracket
  double bracket_width = 0.0;
  int monotonic_violations = 0;           // Phi[k+1] > Phi[k] + bracket_width
  std::optional<double> axis_intercept;   // end of the convergent part of phi2 = 0
};

// Bisects one column in phi2 over [0, 1/(2b)]. Throws NoBracket when the
// column is entirely one class.
SeparatrixColumn separatrix_column(double phi1, const MapParams& p, const SeparatrixOptions& opt);

// Bisects the invariant axis phi2 = 0 between 0 (convergent) and alpha.
std::optional<double> separatrix_axis_intercept(const MapParams& p, const SeparatrixOptions& opt);

SeparatrixEstimate estimate_separatrix(const MapParams& p, const std::vector<double>& phi1_samples,
                                       const SeparatrixOptions& opt = {});

// Phi interpolated at phi1 (nullopt outside the sampled range).
std::optional<double> separatrix_at(const SeparatrixEstimate& est, double phi1);

struct LowEnergySeparatrixRow {
  double Y = 0.0;
  double X_low = 0.0;   // converges
  double X_high = 0.0;  // leaves the domain
};

// Row-wise bisection in X over [0, 1 - R] for the low-energy map.
std::vector<LowEnergySeparatrixRow> estimate_low_energy_separatrix(
    double R, double alpha, const std::vector<double>& Y_samples, const SeparatrixOptions& opt);

struct Polyline {
  std::vector<ReducedState> points;
  OrbitClass outcome;
};

// Forward orbit of the two-collision map from seed, stopping early once the
// orbit is classified.
Polyline trace_invariant_curve(const MapParams& p, ReducedState seed, int steps,
                               const ClassifyLimits& limits = {});

// Number of maximal runs of strictly monotone motion in one coordinate
// (0 = phi1, 1 = phi2), ignoring moves smaller than tol.
int count_monotone_segments(const std::vector<ReducedState>& pts, int coord, double tol = 0.0);

void write_grid_csv(std::ostream& os, const ClassificationGrid& g);
void write_separatrix_csv(std::ostream& os, const SeparatrixEstimate& est);
void write_orbit_csv(std::ostream& os, const std::vector<ReducedState>& pts);

}  // namespace collapse
