#pragma once

#include <array>
#include <utility>

#include "collapse/collision_config.hpp"
#include "collapse/error.hpp"
#include "collapse/scalar.hpp"
#include "collapse/vec.hpp"

namespace collapse {

inline constexpr double kTolContact = 1e-9;
inline constexpr double kTolOverlap = 1e-9;
inline constexpr double kTolUnitNormal = 1e-12;

// Three spheres of diameter 1 in R^d.
template <class Real>
struct ParticleSystem {
  int dim = 2;
  std::array<Vec<Real>, 3> x;
  std::array<Vec<Real>, 3> v;
  Real r = Real(1);
  Real time = Real(0);

  // Throws InvalidArgument on shape problems and Overlapping when two spheres
  // interpenetrate by more than kTolOverlap.
  void validate() const;

  Vec<Real> momentum() const;
  Real kinetic_energy() const;

  template <class To>
  ParticleSystem<To> cast() const {
    ParticleSystem<To> out;
    out.dim = dim;
    for (int k = 0; k < 3; ++k) {
      out.x[k] = x[k].template cast<To>();
      out.v[k] = v[k].template cast<To>();
    }
    out.r = static_cast<To>(r);
    out.time = static_cast<To>(time);
    return out;
  }
};

// Inelastic law for a contact with unit normal omega (either orientation).
// Throws NonUnitNormal.
template <class Real>
std::pair<Vec<Real>, Vec<Real>> apply_collision_law(const Vec<Real>& vi, const Vec<Real>& vj,
                                                    const Vec<Real>& omega, const Real& r);

template <class Real>
struct Extraction {
  CollisionConfig<Real> cfg;
  // Spectator also touching the central particle; gap is clamped to 0.
  bool degenerate_contact = false;
  // eta1 <= 0: the contact pair is not separating (not yet post-collisional).
  bool eta1_nonpositive = false;
};

// Reads (omega1, W1, d, omega2, W2) relative to the central particle.
// Throws NotInContact / Overlapping.
template <class Real>
Extraction<Real> extract_collision_config(const ParticleSystem<Real>& sys, int central,
                                          int contact, int spectator);

}  // namespace collapse
