#include "collapse/full_mapping.hpp"

#include <cmath>
#include <string>

namespace collapse {

template <class Real>
Real zk_parameter(const CollisionConfig<Real>& cfg) {
  using std::abs;
  Real eta2 = cfg.eta2();
  if (abs(eta2) < Real(1e-300))
    throw Error(Errc::ZeroNormalComponent, "eta2 vanishes; zeta is undefined");
  const Real& d = cfg.gap;
  Real one_d = Real(1) + d;
  return d * (Real(2) + d) * norm2(cfg.W2) / (one_d * one_d * eta2 * eta2);
}

template <class Real>
Real collision_time(const CollisionConfig<Real>& cfg) {
  using std::sqrt;
  Real eta2 = cfg.eta2();
  if (!(eta2 < Real(0))) throw Error(Errc::NoFutureCollision, "eta2 >= 0: spectator recedes");
  Real zeta = zk_parameter(cfg);
  if (!(zeta < Real(1))) throw Error(Errc::NoFutureCollision, "zeta >= 1: spectator misses");
  // 1 - sqrt(1 - zeta) written without cancellation.
  Real w = zeta / (Real(1) + sqrt(Real(1) - zeta));
  return (Real(1) + cfg.gap) * (-eta2) / norm2(cfg.W2) * w;
}

template <class Real>
PreCollisionCheck check_preconditions(const CollisionConfig<Real>& cfg) {
  PreCollisionCheck c;
  c.eta1_pos = cfg.eta1() > Real(0);
  Real eta2 = cfg.eta2();
  c.eta2_neg = eta2 < Real(0);
  if (eta2 != Real(0)) {
    Real zeta = zk_parameter(cfg);
    c.zeta = static_cast<double>(zeta);
    c.zeta_lt_1 = zeta < Real(1);
  }
  return c;
}

template <class Real>
bool is_grazing_marginal(const CollisionConfig<Real>& cfg) {
  if (cfg.eta2() == Real(0)) return false;
  Real zeta = zk_parameter(cfg);
  return zeta >= Real(1) - Real(kZetaMarginal) && zeta < Real(1);
}

template <class Real>
CollisionConfig<Real> complete_one_collision(const CollisionConfig<Real>& cfg, const Real& r,
                                             Real& tau_out) {
  using std::sqrt;
  PreCollisionCheck pc = check_preconditions(cfg);
  if (!pc.eta1_pos) throw Error(Errc::PreconditionViolated, "eta1 > 0 fails");
  if (!pc.eta2_neg) throw Error(Errc::PreconditionViolated, "eta2 < 0 fails");
  if (!pc.zeta_lt_1)
    throw Error(Errc::PreconditionViolated, "zeta < 1 fails (zeta = " + format_real(pc.zeta) + ")");

  const Real half_1r = (Real(1) + r) / Real(2);
  const Real& d = cfg.gap;
  const Real eta1 = cfg.eta1();
  const Real eta2 = cfg.eta2();
  const Real w1sq = norm2(cfg.W1);
  const Real w2sq = norm2(cfg.W2);
  const Real tau = collision_time(cfg);
  tau_out = tau;

  // New gap of the contact particle, (1+d')^2 = 1 + 2 eta1 tau + |W1|^2 tau^2.
  const Real q = Real(2) * eta1 * tau + w1sq * tau * tau;
  const Real d1 = q / (sqrt(Real(1) + q) + Real(1));

  Vec<Real> om1 = (cfg.omega1 + tau * cfg.W1) / (Real(1) + d1);
  Vec<Real> om2 = (Real(1) + d) * cfg.omega2 + tau * cfg.W2;

  // Normal approach speed of the spectator at impact.
  const Real eta2_hit = (Real(1) + d) * eta2 + tau * w2sq;
  const Real eta2_new = -r * eta2_hit;
  const Real c12 = dot(om1, om2);
  const Real eta1_new = (eta1 + tau * w1sq) / (Real(1) + d1) - half_1r * c12 * eta2_hit;

  Vec<Real> w1_perp = cfg.W1 - dot(cfg.W1, om1) * om1 + half_1r * eta2_hit * (c12 * om1 - om2);
  Vec<Real> w2_perp = cfg.W2 - dot(cfg.W2, om2) * om2;

  CollisionConfig<Real> out;
  out.omega1 = om2;
  out.W1 = w2_perp + eta2_new * om2;
  out.gap = d1;
  out.omega2 = om1;
  out.W2 = w1_perp + eta1_new * om1;
  return out;
}

template <class Real>
CollisionConfig<Real> complete_one_collision(const CollisionConfig<Real>& cfg, const Real& r) {
  Real tau;
  return complete_one_collision(cfg, r, tau);
}

#define COLLAPSE_INSTANTIATE(Real)                                                          \
  template Real zk_parameter(const CollisionConfig<Real>&);                                 \
  template Real collision_time(const CollisionConfig<Real>&);                               \
  template PreCollisionCheck check_preconditions(const CollisionConfig<Real>&);             \
  template bool is_grazing_marginal(const CollisionConfig<Real>&);                          \
  template CollisionConfig<Real> complete_one_collision(const CollisionConfig<Real>&,       \
                                                        const Real&, Real&);                \
  template CollisionConfig<Real> complete_one_collision(const CollisionConfig<Real>&,       \
                                                        const Real&);

COLLAPSE_INSTANTIATE(double)
COLLAPSE_INSTANTIATE(HighReal)

}  // namespace collapse
