#pragma once

#include "collapse/collision_config.hpp"
#include "collapse/error.hpp"
#include "collapse/scalar.hpp"

namespace collapse {

struct PreCollisionCheck {
  bool eta1_pos = false;
  bool eta2_neg = false;
  double zeta = 0.0;
  bool zeta_lt_1 = false;

  bool ok() const noexcept { return eta1_pos && eta2_neg && zeta_lt_1; }
};

// Configurations with zeta in [1 - kZetaMarginal, 1) are grazing-marginal.
inline constexpr double kZetaMarginal = 1e-12;

// zeta = d(2+d)|W2|^2 / ((1+d)^2 eta2^2). Throws ZeroNormalComponent.
template <class Real>
Real zk_parameter(const CollisionConfig<Real>& cfg);

// Time until the spectator reaches the central particle.
// Throws NoFutureCollision if eta2 >= 0 or zeta >= 1.
template <class Real>
Real collision_time(const CollisionConfig<Real>& cfg);

template <class Real>
PreCollisionCheck check_preconditions(const CollisionConfig<Real>& cfg);

template <class Real>
bool is_grazing_marginal(const CollisionConfig<Real>& cfg);

// Free flight up to the central/spectator collision, the collision itself,
// and the relabeling: the returned config has the spectator as the new contact
// particle and the old contact particle as the new spectator.
// Throws PreconditionViolated naming the failed condition.
template <class Real>
CollisionConfig<Real> complete_one_collision(const CollisionConfig<Real>& cfg, const Real& r);

// Same as complete_one_collision but also returns the flight time.
template <class Real>
CollisionConfig<Real> complete_one_collision(const CollisionConfig<Real>& cfg, const Real& r,
                                             Real& tau_out);

}  // namespace collapse
