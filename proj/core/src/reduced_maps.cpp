#include "collapse/reduced_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace collapse {

std::string_view to_string(MapStatus s) noexcept {
  switch (s) {
    case MapStatus::Ok: return "Ok";
    case MapStatus::SqrtDomain: return "SqrtDomain";
    case MapStatus::SingularDenominator: return "SingularDenominator";
  }
  return "Unknown";
}

MapParams MapParams::from_ab(double r, double alpha, double a, double b) {
  return MapParams{r, alpha, a, b, b / a};
}

MapParams MapParams::from_bT(double r, double alpha, double b, double T) {
  return MapParams{r, alpha, b / T, b, T};
}

MapParams MapParams::symmetric(double r, double alpha, double b) {
  return MapParams{r, alpha, b, b, 1.0};
}

double MapParams::alpha_from_angle(double r, double theta) {
  return (1.0 + r) / 2.0 * (-std::cos(theta));
}

void MapParams::validate() const {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::InvalidArgument, "r must lie in (0,1)");
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw Error(Errc::InvalidArgument, "alpha must lie in [0,1)");
  if (!(a > 0.0 && b > 0.0 && T > 0.0))
    throw Error(Errc::InvalidArgument, "a, b and T must be positive");
  if (std::abs(T * a - b) > 1e-12 * std::max(1.0, b))
    throw Error(Errc::InvalidArgument, "T * a must equal b");
}

namespace {

// 1 - sqrt(1 - z) without cancellation.
inline double one_minus_sqrt(double z, double sq) { return z / (1.0 + sq); }

MapStep kernel(ReducedState s, double r, double alpha, double b, double T) {
  MapStep out;
  out.stage = 1;
  out.mid = s;
  const double z = 2.0 * b * s.phi2;
  double rad = 1.0 - z;
  if (rad < 0.0) {
    // Rounding of 2 b (1/(2b)) on the upper boundary.
    if (rad > -4.0 * std::numeric_limits<double>::epsilon()) {
      rad = 0.0;
    } else {
      out.status = MapStatus::SqrtDomain;
      out.s = s;
      return out;
    }
  }
  const double invT = 1.0 / T;
  const double sq = std::sqrt(rad);
  const double w = rad == 0.0 ? 1.0 : one_minus_sqrt(z, sq);
  const double D = (alpha + invT) * sq - s.phi1 - invT;
  if (std::abs(D) < kSingularDenominator) {
    out.status = MapStatus::SingularDenominator;
    out.s = s;
    return out;
  }
  out.s.phi1 = r * sq / D;
  out.s.phi2 = (w / b) * (s.phi1 + 0.5 * invT * w) / (D * D);
  return out;
}

}  // namespace

MapStep try_one_collision(ReducedState s, double r, double alpha, double b, double T) {
  return kernel(s, r, alpha, b, T);
}

MapStep try_two_collision(ReducedState s, const MapParams& p) {
  MapStep first = kernel(s, p.r, p.alpha, p.b, p.T);
  if (!first.ok()) return first;
  MapStep second = kernel(first.s, p.r, p.alpha, p.b / p.T, 1.0 / p.T);
  second.stage = 2;
  second.mid = first.s;
  return second;
}

MapStep try_symmetric_map(ReducedState s, const MapParams& p) {
  return kernel(s, p.r, p.alpha, p.b, 1.0);
}

namespace {

ReducedState unwrap(const MapStep& st, const char* what) {
  if (st.ok()) return st.s;
  std::string msg = std::string(what) + " failed at collision " + std::to_string(st.stage);
  if (st.status == MapStatus::SqrtDomain)
    throw Error(Errc::SqrtDomain, msg + " (1 - 2 b phi2 < 0)");
  throw Error(Errc::SingularDenominator, msg + " (denominator vanishes)");
}

}  // namespace

ReducedState one_collision(ReducedState s, const MapParams& p) {
  return unwrap(try_one_collision(s, p.r, p.alpha, p.b, p.T), "one_collision");
}

ReducedState two_collision(ReducedState s, const MapParams& p) {
  return unwrap(try_two_collision(s, p), "two_collision");
}

ReducedState symmetric_map(ReducedState s, const MapParams& p) {
  return unwrap(try_symmetric_map(s, p), "symmetric_map");
}

HybridState to_hybrid(ReducedState s, double b) {
  const double z = 2.0 * b * s.phi2;
  if (1.0 - z < 0.0) throw Error(Errc::SqrtDomain, "1 - 2 b y < 0");
  return {s.phi1, one_minus_sqrt(z, std::sqrt(1.0 - z))};
}

ReducedState from_hybrid(HybridState h, double b) {
  if (h.w < 0.0 || h.w > 1.0) throw Error(Errc::SqrtDomain, "w must lie in [0,1]");
  return {h.x, (2.0 * h.w - h.w * h.w) / (2.0 * b)};
}

ReducedState symmetric_map_hybrid(HybridState h, const MapParams& p) {
  const double den = (p.alpha + 1.0) * h.w + h.x - p.alpha;
  if (std::abs(den) < kSingularDenominator)
    throw Error(Errc::SingularDenominator, "(alpha+1) w + x - alpha vanishes");
  return {p.r * (h.w - 1.0) / den, (h.w / p.b) * (h.x + 0.5 * h.w) / (den * den)};
}

LowEnergyStep try_low_energy_map(LowEnergyState s, double R, double alpha) {
  LowEnergyStep out;
  const double u = 1.0 - s.X;
  const double v = u - R;
  if (std::abs(u) < kSingularDenominator || std::abs(v) < kSingularDenominator) {
    out.status = MapStatus::SingularDenominator;
    out.s = s;
    return out;
  }
  out.s.X = R * u / v;
  out.s.Y = (R / (alpha * alpha)) * s.X * s.Y / (u * v * v);
  return out;
}

LowEnergyState low_energy_map(LowEnergyState s, double R, double alpha) {
  LowEnergyStep st = try_low_energy_map(s, R, alpha);
  if (!st.ok()) throw Error(Errc::SingularDenominator, "1 - X or 1 - X - R vanishes");
  return st.s;
}

OneCollisionPartials one_collision_partials(ReducedState st, double r, double alpha, double b,
                                            double T) {
  const double x = st.phi1;
  const double z = 2.0 * b * st.phi2;
  if (1.0 - z <= 0.0) throw Error(Errc::SqrtDomain, "1 - 2 b y <= 0");
  const double invT = 1.0 / T;
  const double s = std::sqrt(1.0 - z);
  const double w = one_minus_sqrt(z, s);
  const double D = (alpha + invT) * s - x - invT;
  if (std::abs(D) < kSingularDenominator)
    throw Error(Errc::SingularDenominator, "one-collision denominator vanishes");
  const double D2 = D * D;
  const double D3 = D2 * D;
  OneCollisionPartials J;
  J.dx_f1 = r * s / D2;
  J.dy_f1 = r * b * (x + invT) / (s * D2);
  J.dx_f2 = w * (alpha * s + x) / (b * D3);
  J.dy_f2 = (x * D + w * ((alpha + invT) * (2.0 * x + invT) - (x + invT) * invT)) / (s * D3);
  return J;
}

ConsistencyReport low_energy_limit_consistency(double R, double alpha, double T,
                                               const std::vector<double>& eps_list,
                                               const ConsistencyBox& box) {
  ConsistencyReport rep;
  rep.R = R;
  rep.alpha = alpha;
  rep.T = T;
  const double r = R * alpha * alpha;
  for (double eps : eps_list) {
    ConsistencyRow row;
    row.eps = eps;
    MapParams p = MapParams::from_bT(r, alpha, eps, T);
    for (int i = 0; i < box.nX; ++i) {
      const double X = box.X_lo + (box.X_hi - box.X_lo) * i / std::max(1, box.nX - 1);
      for (int j = 0; j < box.nY; ++j) {
        const double Y = box.Y_lo + (box.Y_hi - box.Y_lo) * j / std::max(1, box.nY - 1);
        if (X > 1.0 - R) {
          ++row.non_comparable;
          continue;
        }
        MapStep full = try_two_collision({alpha * X, Y}, p);
        LowEnergyStep le = try_low_energy_map({X, Y}, R, alpha);
        if (!full.ok() || !le.ok()) {
          ++row.non_comparable;
          continue;
        }
        const double g = std::max(std::abs(full.s.phi1 / alpha - le.s.X),
                                  std::abs(full.s.phi2 - le.s.Y));
        row.gap = std::max(row.gap, g);
        ++row.compared;
      }
    }
    rep.rows.push_back(row);
  }
  rep.linear = rep.rows.size() >= 2;
  rep.decreasing = rep.rows.size() >= 2;
  for (std::size_t k = 0; k + 1 < rep.rows.size(); ++k) {
    const auto& hi = rep.rows[k];
    const auto& lo = rep.rows[k + 1];
    const double decades = std::log10(hi.eps / lo.eps);
    const double ratio = (lo.gap > 0.0 && decades > 0.0)
                             ? std::pow(hi.gap / lo.gap, 1.0 / decades)
                             : std::numeric_limits<double>::infinity();
    rep.decade_ratios.push_back(ratio);
    if (!(ratio >= 8.0)) rep.linear = false;
    if (!(lo.gap < hi.gap)) rep.decreasing = false;
  }
  return rep;
}

}  // namespace collapse
