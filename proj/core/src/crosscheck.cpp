#include "collapse/crosscheck.hpp"

#include <algorithm>
#include <cmath>

#include "collapse/equilibria.hpp"
#include "collapse/simulator.hpp"

namespace collapse {

namespace {

Vec<double> random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  for (;;) {
    Vec<double> v(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] = n01(rng);
    const double nv = norm(v);
    if (nv > 1e-3) return v / nv;
  }
}

Vec<double> random_vec(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec<double> v(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] = n01(rng);
  return v;
}

double rel_gap(const Jacobian2& a, const Jacobian2& b) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      num = std::max(num, std::abs(a.m[i][j] - b.m[i][j]));
      den = std::max(den, std::abs(a.m[i][j]));
    }
  return den > 0.0 ? num / den : num;
}

}  // namespace

template <class Real>
ParticleSystem<Real> embed_config(const CollisionConfig<Real>& cfg, const Real& r) {
  ParticleSystem<Real> s;
  s.dim = static_cast<int>(cfg.dim());
  s.r = r;
  s.x[0] = Vec<Real>(cfg.dim());
  s.v[0] = Vec<Real>(cfg.dim());
  s.x[1] = cfg.omega1;
  s.v[1] = cfg.W1;
  s.x[2] = (Real(1) + cfg.gap) * cfg.omega2;
  s.v[2] = cfg.W2;
  return s;
}

template <class Real>
CollisionConfig<Real> flow_one_collision(const CollisionConfig<Real>& cfg, const Real& r,
                                         Real* tau) {
  StopCriteria stop;
  stop.max_events = 1;
  stop.min_gap = 0.0;
  RunResult<Real> res = run(embed_config(cfg, r), stop);
  if (res.events.size() != 1 || res.events[0].i != 0 || res.events[0].j != 2)
    throw Error(Errc::PreconditionViolated,
                "the central/spectator collision is not the next event of the flow");
  if (tau) *tau = res.events[0].time;
  return extract_collision_config(res.final_state, 0, 2, 1).cfg;
}

CollisionConfig<double> random_valid_config(int dim, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gap_dist(1e-3, 0.5);
  for (;;) {
    CollisionConfig<double> c;
    c.omega1 = random_unit(dim, rng);
    c.W1 = random_vec(dim, rng);
    double e1 = dot(c.W1, c.omega1);
    if (e1 < 0.0) c.W1 -= 2.0 * e1 * c.omega1;
    if (dot(c.W1, c.omega1) < 0.05) continue;
    c.gap = gap_dist(rng);
    c.omega2 = random_unit(dim, rng);
    if (norm(c.omega1 - (1.0 + c.gap) * c.omega2) < 1.05) continue;
    c.W2 = random_vec(dim, rng);
    double e2 = dot(c.W2, c.omega2);
    if (e2 > 0.0) c.W2 -= 2.0 * e2 * c.omega2;
    if (dot(c.W2, c.omega2) > -0.05) continue;
    if (!(zk_parameter(c) < 1.0 - 1e-6)) continue;
    auto nc = next_collision(embed_config(c, r));
    if (!nc || nc->i != 0 || nc->j != 2) continue;
    return c;
  }
}

double config_distance(const CollisionConfig<double>& a, const CollisionConfig<double>& b) {
  return std::max({max_abs_diff(a.omega1, b.omega1), max_abs_diff(a.W1, b.W1),
                   std::abs(a.gap - b.gap), max_abs_diff(a.omega2, b.omega2),
                   max_abs_diff(a.W2, b.W2)});
}

CheckResult check_full_mapping_vs_flow(int dim, int samples, std::uint64_t seed, double tol) {
  CheckResult res;
  res.name = "full mapping vs event flow (d=" + std::to_string(dim) + ")";
  res.tolerance = tol;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rdist(0.01, 0.99);
  for (int k = 0; k < samples; ++k) {
    const double r = rdist(rng);
    const CollisionConfig<double> c = random_valid_config(dim, r, rng);
    const double err = config_distance(complete_one_collision(c, r), flow_one_collision(c, r));
    res.max_error = std::max(res.max_error, err);
    ++res.samples;
  }
  res.pass = res.max_error <= tol;
  return res;
}

namespace {

struct RandomMapCase {
  ReducedState s;
  MapParams p;
};

RandomMapCase random_map_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomMapCase c;
  const double r = 0.01 + 0.19 * u(rng);
  const double alpha = 0.3 + 0.65 * u(rng);
  const double b = 0.2 + 1.8 * u(rng);
  const double T = 0.3 + 2.7 * u(rng);
  c.p = MapParams::from_bT(r, alpha, b, T);
  c.s = {0.6 * alpha * u(rng), u(rng) / (2.0 * b)};
  return c;
}

}  // namespace

CheckResult check_composition(int samples, std::uint64_t seed, double tol) {
  CheckResult res;
  res.name = "two-collision = composition of one-collision maps";
  res.tolerance = tol;
  std::mt19937_64 rng(seed);
  int tried = 0;
  while (res.samples < samples && tried < 100 * samples) {
    ++tried;
    RandomMapCase c = random_map_case(rng);
    MapStep two = try_two_collision(c.s, c.p);
    if (!two.ok()) continue;
    MapStep first = try_one_collision(c.s, c.p.r, c.p.alpha, c.p.b, c.p.T);
    MapStep second = try_one_collision(first.s, c.p.r, c.p.alpha, c.p.b / c.p.T, 1.0 / c.p.T);
    const double err =
        std::max(std::abs(two.s.phi1 - second.s.phi1) / std::max(1.0, std::abs(second.s.phi1)),
                 std::abs(two.s.phi2 - second.s.phi2) / std::max(1.0, std::abs(second.s.phi2)));
    res.max_error = std::max(res.max_error, err);
    ++res.samples;
  }
  res.pass = res.samples == samples && res.max_error <= tol;
  return res;
}

CheckResult check_invariant_line(int samples, std::uint64_t seed) {
  CheckResult res;
  res.name = "phi2 = 0 is invariant (exact)";
  std::mt19937_64 rng(seed);
  int tried = 0;
  while (res.samples < samples && tried < 100 * samples) {
    ++tried;
    RandomMapCase c = random_map_case(rng);
    c.s.phi2 = 0.0;
    MapStep two = try_two_collision(c.s, c.p);
    if (!two.ok()) continue;
    res.max_error = std::max(res.max_error, std::abs(two.s.phi2));
    ++res.samples;
  }
  res.pass = res.samples == samples && res.max_error == 0.0;
  return res;
}

CheckResult check_hybrid_conjugacy(int samples, std::uint64_t seed, double tol) {
  CheckResult res;
  res.name = "hybrid form conjugate to the symmetric map";
  res.tolerance = tol;
  std::mt19937_64 rng(seed);
  int skipped = 0;
  int tried = 0;
  while (res.samples < samples && tried < 100 * samples) {
    ++tried;
    RandomMapCase c = random_map_case(rng);
    const MapParams p = MapParams::symmetric(c.p.r, c.p.alpha, c.p.b);
    const HybridState h = to_hybrid(c.s, p.b);
    // Skip the neighbourhood of the pole, where both forms are ill-conditioned.
    if (std::abs((p.alpha + 1.0) * h.w + h.x - p.alpha) < 1e-3) {
      ++skipped;
      continue;
    }
    MapStep direct = try_symmetric_map(c.s, p);
    if (!direct.ok()) continue;
    const ReducedState hy = symmetric_map_hybrid(h, p);
    const double err =
        std::max(std::abs(hy.phi1 - direct.s.phi1) / std::max(1.0, std::abs(direct.s.phi1)),
                 std::abs(hy.phi2 - direct.s.phi2) / std::max(1.0, std::abs(direct.s.phi2)));
    res.max_error = std::max(res.max_error, err);
    ++res.samples;
  }
  res.detail = std::to_string(skipped) + " near-pole samples skipped";
  res.pass = res.samples == samples && res.max_error <= tol;
  return res;
}

CheckResult check_symmetric_is_T1(int samples, std::uint64_t seed) {
  CheckResult res;
  res.name = "symmetric map = one-collision map with T = 1 (exact)";
  std::mt19937_64 rng(seed);
  int tried = 0;
  while (res.samples < samples && tried < 100 * samples) {
    ++tried;
    RandomMapCase c = random_map_case(rng);
    const MapParams p = MapParams::symmetric(c.p.r, c.p.alpha, c.p.b);
    MapStep a = try_symmetric_map(c.s, p);
    MapStep b = try_one_collision(c.s, p.r, p.alpha, p.b, 1.0);
    if (!a.ok() || !b.ok()) continue;
    res.max_error = std::max({res.max_error, std::abs(a.s.phi1 - b.s.phi1),
                              std::abs(a.s.phi2 - b.s.phi2)});
    ++res.samples;
  }
  res.pass = res.samples == samples && res.max_error == 0.0;
  return res;
}

CheckResult check_jacobian_line(int samples, std::uint64_t seed, double tol) {
  CheckResult res;
  res.name = "analytic Jacobian on phi2 = 0 vs finite differences";
  res.tolerance = tol;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tried = 0;
  while (res.samples < samples && tried < 100 * samples) {
    ++tried;
    RandomMapCase c = random_map_case(rng);
    const double top = c.p.alpha - c.p.r / c.p.alpha - 0.01;
    if (top <= 0.0) continue;
    const ReducedState s{top * u(rng), 0.0};
    try {
      const double err = rel_gap(jacobian_two_collision(s, c.p), jacobian_two_collision_fd(s, c.p));
      res.max_error = std::max(res.max_error, err);
      ++res.samples;
    } catch (const Error&) {
    }
  }
  res.pass = res.samples == samples && res.max_error <= tol;
  return res;
}

CheckResult check_jacobian_chain(int samples, std::uint64_t seed, double tol) {
  CheckResult res;
  res.name = "chain-rule Jacobian vs finite differences off the axis";
  res.tolerance = tol;
  std::mt19937_64 rng(seed);
  int tried = 0;
  while (res.samples < samples && tried < 100 * samples) {
    ++tried;
    RandomMapCase c = random_map_case(rng);
    c.s.phi2 *= 0.5;
    try {
      MapStep first = try_one_collision(c.s, c.p.r, c.p.alpha, c.p.b, c.p.T);
      MapStep two = try_two_collision(c.s, c.p);
      // Stay away from poles and the sqrt boundary where differences are unreliable.
      if (!first.ok() || !two.ok()) continue;
      if (2.0 * c.p.b / c.p.T * first.s.phi2 > 0.9) continue;
      const Jacobian2 a = jacobian_two_collision_chain(c.s, c.p);
      const Jacobian2 f = jacobian_two_collision_fd(c.s, c.p);
      double mag = 0.0;
      for (auto& row : a.m)
        for (double v : row) mag = std::max(mag, std::abs(v));
      if (mag > 1e3) continue;
      res.max_error = std::max(res.max_error, rel_gap(a, f));
      ++res.samples;
    } catch (const Error&) {
    }
  }
  res.pass = res.samples == samples && res.max_error <= tol;
  return res;
}

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, int samples) {
  return {
      check_full_mapping_vs_flow(2, samples, seed),
      check_full_mapping_vs_flow(3, samples, seed + 1),
      check_composition(samples, seed + 2),
      check_invariant_line(samples, seed + 3),
      check_hybrid_conjugacy(samples, seed + 4),
      check_symmetric_is_T1(samples, seed + 5),
      check_jacobian_line(samples, seed + 6),
      check_jacobian_chain(samples, seed + 7),
  };
}

ParticleSystem<HighReal> scripted_collapse_datum(double r, int dim) {
  ParticleSystem<HighReal> s;
  s.dim = dim;
  s.r = HighReal(r);
  auto vec = [dim](const char* a, const char* b) {
    Vec<HighReal> v(static_cast<std::size_t>(dim));
    v[0] = HighReal(a);
    v[1] = HighReal(b);
    return v;
  };
  s.x[0] = vec("-1.02", "0");
  s.v[0] = vec("1", "0.3");
  s.x[1] = vec("0", "0");
  s.v[1] = vec("0", "0");
  s.x[2] = vec("1.1", "0.05");
  s.v[2] = vec("-1", "-0.2");
  return s;
}

#define COLLAPSE_INSTANTIATE(Real)                                                         \
  template ParticleSystem<Real> embed_config(const CollisionConfig<Real>&, const Real&);   \
  template CollisionConfig<Real> flow_one_collision(const CollisionConfig<Real>&,          \
                                                    const Real&, Real*);

COLLAPSE_INSTANTIATE(double)
COLLAPSE_INSTANTIATE(HighReal)

}  // namespace collapse
