#pragma once

#include "collapse/vec.hpp"

namespace collapse {

// State of a three-particle configuration seen from the central particle,
// right after the central/contact collision:
//   omega1  unit vector central -> contact particle (in contact)
//   W1      contact velocity relative to the central particle
//   gap     spectator distance minus one
//   omega2  unit vector central -> spectator
//   W2      spectator velocity relative to the central particle
template <class Real>
struct CollisionConfig {
  Vec<Real> omega1;
  Vec<Real> W1;
  Real gap = Real(0);
  Vec<Real> omega2;
  Vec<Real> W2;

  std::size_t dim() const noexcept { return omega1.size(); }
  Real eta1() const { return dot(W1, omega1); }
  Real eta2() const { return dot(W2, omega2); }

  template <class To>
  CollisionConfig<To> cast() const {
    return {omega1.template cast<To>(), W1.template cast<To>(), static_cast<To>(gap),
            omega2.template cast<To>(), W2.template cast<To>()};
  }
};

}  // namespace collapse
