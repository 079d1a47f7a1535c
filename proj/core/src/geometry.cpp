#include "collapse/geometry.hpp"

#include <cstdio>
#include <sstream>

namespace collapse {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_real(const HighReal& x) {
  std::ostringstream os;
  os.precision(40);
  os << x;
  return os.str();
}

template <class Real>
void ParticleSystem<Real>::validate() const {
  using std::sqrt;
  if (dim < 2) throw Error(Errc::InvalidArgument, "dimension must be at least 2");
  if (!(r > Real(0) && r <= Real(1)))
    throw Error(Errc::InvalidArgument, "restitution coefficient must lie in (0,1]");
  for (int k = 0; k < 3; ++k) {
    if (x[k].size() != static_cast<std::size_t>(dim) || v[k].size() != static_cast<std::size_t>(dim))
      throw Error(Errc::InvalidArgument, "particle vectors do not match the dimension");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      Real dist = norm(x[i] - x[j]);
      if (dist < Real(1) - Real(kTolOverlap))
        throw Error(Errc::Overlapping, "particles " + std::to_string(i) + " and " +
                                           std::to_string(j) + " overlap");
    }
  }
}

template <class Real>
Vec<Real> ParticleSystem<Real>::momentum() const {
  return v[0] + v[1] + v[2];
}

template <class Real>
Real ParticleSystem<Real>::kinetic_energy() const {
  return (norm2(v[0]) + norm2(v[1]) + norm2(v[2])) / Real(2);
}

template <class Real>
std::pair<Vec<Real>, Vec<Real>> apply_collision_law(const Vec<Real>& vi, const Vec<Real>& vj,
                                                    const Vec<Real>& omega, const Real& r) {
  using std::abs;
  if (abs(norm(omega) - Real(1)) > Real(kTolUnitNormal))
    throw Error(Errc::NonUnitNormal, "collision normal is not a unit vector");
  Real s = (Real(1) + r) / Real(2) * dot(vi - vj, omega);
  return {vi - s * omega, vj + s * omega};
}

template <class Real>
Extraction<Real> extract_collision_config(const ParticleSystem<Real>& sys, int central,
                                          int contact, int spectator) {
  using std::abs;
  if (central == contact || central == spectator || contact == spectator || central < 0 ||
      contact < 0 || spectator < 0 || central > 2 || contact > 2 || spectator > 2)
    throw Error(Errc::InvalidArgument, "indices must be a permutation of {0,1,2}");

  Vec<Real> rel1 = sys.x[contact] - sys.x[central];
  Real dist1 = norm(rel1);
  if (dist1 < Real(1) - Real(kTolOverlap))
    throw Error(Errc::Overlapping, "contact particle overlaps the central one");
  if (abs(dist1 - Real(1)) > Real(kTolContact))
    throw Error(Errc::NotInContact, "contact particle is not at distance 1");

  Vec<Real> rel2 = sys.x[spectator] - sys.x[central];
  Real dist2 = norm(rel2);
  if (dist2 < Real(1) - Real(kTolOverlap))
    throw Error(Errc::Overlapping, "spectator overlaps the central particle");

  Extraction<Real> out;
  out.cfg.omega1 = rel1 / dist1;
  out.cfg.W1 = sys.v[contact] - sys.v[central];
  out.cfg.omega2 = rel2 / dist2;
  out.cfg.W2 = sys.v[spectator] - sys.v[central];
  out.cfg.gap = dist2 - Real(1);
  if (abs(out.cfg.gap) <= Real(kTolContact)) {
    out.degenerate_contact = true;
    if (out.cfg.gap < Real(0)) out.cfg.gap = Real(0);
  }
  out.eta1_nonpositive = !(out.cfg.eta1() > Real(0));
  return out;
}

#define COLLAPSE_INSTANTIATE(Real)                                                          \
  template struct ParticleSystem<Real>;                                                     \
  template std::pair<Vec<Real>, Vec<Real>> apply_collision_law(                             \
      const Vec<Real>&, const Vec<Real>&, const Vec<Real>&, const Real&);                   \
  template Extraction<Real> extract_collision_config(const ParticleSystem<Real>&, int, int, \
                                                     int);

COLLAPSE_INSTANTIATE(double)
COLLAPSE_INSTANTIATE(HighReal)

}  // namespace collapse
