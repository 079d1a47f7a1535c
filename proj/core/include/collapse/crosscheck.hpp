#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "collapse/full_mapping.hpp"
#include "collapse/geometry.hpp"
#include "collapse/reduced_maps.hpp"

namespace collapse {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_error = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  std::string detail;
};

// Valid pre-collision configuration: eta1 > 0, eta2 < 0, zeta < 1, the
// spectator/contact pair not touching, and the central/spectator collision
// being the next event of the free flow.
CollisionConfig<double> random_valid_config(int dim, double r, std::mt19937_64& rng);

// Embeds cfg with the central particle at the origin and at rest.
template <class Real>
ParticleSystem<Real> embed_config(const CollisionConfig<Real>& cfg, const Real& r);

// Runs the event-driven flow for one event from the embedded configuration
// and reads the post-collision configuration back with roles swapped.
template <class Real>
CollisionConfig<Real> flow_one_collision(const CollisionConfig<Real>& cfg, const Real& r,
                                         Real* tau = nullptr);

double config_distance(const CollisionConfig<double>& a, const CollisionConfig<double>& b);

CheckResult check_full_mapping_vs_flow(int dim, int samples, std::uint64_t seed,
                                       double tol = 1e-10);
CheckResult check_composition(int samples, std::uint64_t seed, double tol = 1e-14);
CheckResult check_invariant_line(int samples, std::uint64_t seed);
CheckResult check_hybrid_conjugacy(int samples, std::uint64_t seed, double tol = 1e-12);
CheckResult check_symmetric_is_T1(int samples, std::uint64_t seed);
CheckResult check_jacobian_line(int samples, std::uint64_t seed, double tol = 1e-5);
CheckResult check_jacobian_chain(int samples, std::uint64_t seed, double tol = 1e-5);

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, int samples = 1000);

// Near-collinear datum with the middle particle at rest between two incoming
// ones; collapses in the nearly-linear pattern for small r.
ParticleSystem<HighReal> scripted_collapse_datum(double r, int dim = 2);

}  // namespace collapse
