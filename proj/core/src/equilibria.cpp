#include "collapse/equilibria.hpp"
#include "collapse/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace collapse {

std::string_view to_string(FixedPointKind k) noexcept {
  switch (k) {
    case FixedPointKind::None: return "None";
    case FixedPointKind::Double: return "Double";
    case FixedPointKind::Pair: return "Pair";
  }
  return "Unknown";
}

namespace {

constexpr double kDoubleRootTol = 1e-12;

// Bisection on a sign change until the interval stops shrinking.
double bisect(const std::function<double(double)>& f, double lo, double hi, double width = 0.0) {
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= width) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Secant-style Newton polish, kept only while the residual improves.
double newton_polish(const std::function<double(double)>& f, double x, int iters = 4) {
  double fx = f(x);
  for (int k = 0; k < iters && fx != 0.0; ++k) {
    const double h = 1e-7 * std::max(std::abs(x), 1e-12);
    const double slope = (f(x + h) - f(x - h)) / (2.0 * h);
    if (!(slope != 0.0) || !std::isfinite(slope)) break;
    const double xn = x - fx / slope;
    const double fn = f(xn);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = xn;
    fx = fn;
  }
  return x;
}

}  // namespace

BoundaryFixedPoints boundary_fixed_points(double r, double alpha) {
  BoundaryFixedPoints out;
  const double disc = alpha * alpha - 4.0 * r;
  if (std::abs(disc) <= kDoubleRootTol) {
    out.kind = FixedPointKind::Double;
    out.phi_minus = out.phi_plus = alpha / 2.0;
  } else if (disc > 0.0) {
    out.kind = FixedPointKind::Pair;
    const double plus = 0.5 * (alpha + std::sqrt(disc));
    out.phi_plus = plus;
    out.phi_minus = r / plus;
  }
  return out;
}

double phi2zero_step(double phi1, double r, double alpha) {
  const double den = alpha * (alpha - phi1) - r;
  if (std::abs(den) < kSingularDenominator)
    throw Error(Errc::SingularDenominator, "phi1 = alpha - r/alpha");
  return r / alpha + (r * r / alpha) / den;
}

double phi2zero_derivative(double phi1, double r, double alpha) {
  const double den = alpha * (alpha - phi1) - r;
  if (std::abs(den) < kSingularDenominator)
    throw Error(Errc::SingularDenominator, "phi1 = alpha - r/alpha");
  return r * r / (den * den);
}

Jacobian2 make_jacobian(const std::array<std::array<double, 2>, 2>& m) {
  Jacobian2 J;
  J.m = m;
  const double tr = J.trace();
  const double det = J.det();
  const double half = 0.5 * tr;
  const double disc = half * half - det;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    // Larger-magnitude root first, the other from the product.
    const double big = half >= 0.0 ? half + sq : half - sq;
    const double small = big != 0.0 ? det / big : half - sq;
    J.eigenvalues = {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  } else {
    const double im = std::sqrt(-disc);
    J.eigenvalues = {std::complex<double>(half, im), std::complex<double>(half, -im)};
  }
  J.spectral_radius = std::max(std::abs(J.eigenvalues[0]), std::abs(J.eigenvalues[1]));
  return J;
}

double lambda1(double phi1, double r, double alpha) {
  const double q = alpha * alpha - r - alpha * phi1;
  return r * r / (q * q);
}

double lambda2(double phi1, double r, double alpha) {
  const double q = alpha * alpha - r - alpha * phi1;
  return r * phi1 / ((alpha - phi1) * q * q);
}

namespace {

using StepFn = std::function<MapStep(ReducedState)>;

Jacobian2 centered_fd(ReducedState s, const StepFn& step) {
  std::array<std::array<double, 2>, 2> m{};
  for (int j = 0; j < 2; ++j) {
    const double base = j == 0 ? s.phi1 : s.phi2;
    const double h = 1e-7 * std::max(std::abs(base), 1.0);
    ReducedState plus = s, minus = s;
    (j == 0 ? plus.phi1 : plus.phi2) += h;
    (j == 0 ? minus.phi1 : minus.phi2) -= h;
    MapStep fp = step(plus);
    MapStep fm = step(minus);
    if (!fp.ok() || !fm.ok())
      throw Error(fp.status == MapStatus::SqrtDomain || fm.status == MapStatus::SqrtDomain
                      ? Errc::SqrtDomain
                      : Errc::SingularDenominator,
                  "finite-difference stencil leaves the map domain");
    m[0][j] = (fp.s.phi1 - fm.s.phi1) / (2.0 * h);
    m[1][j] = (fp.s.phi2 - fm.s.phi2) / (2.0 * h);
  }
  return make_jacobian(m);
}

}  // namespace

Jacobian2 jacobian_two_collision_fd(ReducedState s, const MapParams& p) {
  two_collision(s, p);  // surface map errors at the point itself
  return centered_fd(s, [&](ReducedState q) { return try_two_collision(q, p); });
}

Jacobian2 jacobian_symmetric_fd(ReducedState s, const MapParams& p) {
  symmetric_map(s, p);
  return centered_fd(s, [&](ReducedState q) { return try_symmetric_map(q, p); });
}

Jacobian2 jacobian_two_collision_chain(ReducedState s, const MapParams& p) {
  const OneCollisionPartials a = one_collision_partials(s, p.r, p.alpha, p.b, p.T);
  const ReducedState mid = one_collision(s, p);
  const OneCollisionPartials c = one_collision_partials(mid, p.r, p.alpha, p.b / p.T, 1.0 / p.T);
  std::array<std::array<double, 2>, 2> m{};
  m[0][0] = c.dx_f1 * a.dx_f1 + c.dy_f1 * a.dx_f2;
  m[0][1] = c.dx_f1 * a.dy_f1 + c.dy_f1 * a.dy_f2;
  m[1][0] = c.dx_f2 * a.dx_f1 + c.dy_f2 * a.dx_f2;
  m[1][1] = c.dx_f2 * a.dy_f1 + c.dy_f2 * a.dy_f2;
  return make_jacobian(m);
}

Jacobian2 jacobian_two_collision(ReducedState s, const MapParams& p) {
  if (s.phi2 != 0.0) return jacobian_two_collision_fd(s, p);
  two_collision(s, p);
  const double x = s.phi1;
  const double r = p.r;
  const double al = p.alpha;
  const double T = p.T;
  const double q = al * al - r - al * x;
  std::array<std::array<double, 2>, 2> m{};
  m[0][0] = lambda1(x, r, al);
  m[0][1] = r * p.b * (r * T * (x + 1.0 / T) + x * (r / (al - x) + T)) / (T * q * q);
  m[1][0] = 0.0;
  m[1][1] = lambda2(x, r, al);
  return make_jacobian(m);
}

double stability_polynomial_value(double x, double r, double alpha) {
  const double a2 = alpha * alpha;
  const double c3 = a2;
  const double c2 = -alpha * (3.0 * a2 - 2.0 * r);
  const double c1 = (a2 - r) * (3.0 * a2 - r) + r;
  const double c0 = -alpha * (a2 - r) * (a2 - r);
  return ((c3 * x + c2) * x + c1) * x + c0;
}

StabilityPolynomial stability_polynomial(double r, double alpha) {
  StabilityPolynomial out;
  const double a2 = alpha * alpha;
  out.coeffs = {-alpha * (a2 - r) * (a2 - r), (a2 - r) * (3.0 * a2 - r) + r,
                -alpha * (3.0 * a2 - 2.0 * r), a2};
  out.P_zero = stability_polynomial_value(0.0, r, alpha);
  BoundaryFixedPoints bf = boundary_fixed_points(r, alpha);
  if (bf.kind != FixedPointKind::Pair)
    throw Error(Errc::BracketFailed, "no pair of boundary fixed points");
  out.phi_minus = *bf.phi_minus;
  out.phi_plus = *bf.phi_plus;
  out.P_minus = stability_polynomial_value(out.phi_minus, r, alpha);
  out.P_plus = stability_polynomial_value(out.phi_plus, r, alpha);
  if (!(out.P_minus < 0.0 && out.P_plus > 0.0))
    throw Error(Errc::BracketFailed, "P(phi-) < 0 < P(phi+) does not hold");
  auto P = [&](double x) { return stability_polynomial_value(x, r, alpha); };
  out.root = newton_polish(P, bisect(P, out.phi_minus, out.phi_plus));
  return out;
}

double zk_hyperbola_w(double x, double r, double alpha) {
  return (alpha * x - x * x - r) / ((alpha + 1.0) * x - r);
}

double zk_cubic_residual(double x, double w, double r) {
  return 2.0 * x * x * (x + 0.5 * w) - r * r * (2.0 - w) * (w - 1.0) * (w - 1.0);
}

double zk_hyperbola_residual(double x, double w, double r, double alpha) {
  return w * ((alpha + 1.0) * x - r) - (alpha * x - x * x - r);
}

double zk_cubic_w(double x, double r) {
  if (!(x > 0.0)) throw Error(Errc::InvalidArgument, "cubic branch needs x > 0");
  auto G = [&](double w) { return zk_cubic_residual(x, w, r); };
  // G(-3x) < 0 < G(1); the branch lies above the line w = -3x.
  return bisect(G, -3.0 * x, 1.0);
}

Jacobian2 symmetric_jacobian_hybrid(double x, double w, double r, double alpha, double b) {
  const double Dw = (alpha + 1.0) * w + x - alpha;
  const double Dw2 = Dw * Dw;
  const double Dw3 = Dw2 * Dw;
  std::array<std::array<double, 2>, 2> m{};
  m[0][0] = r * (1.0 - w) / Dw2;
  m[0][1] = r * b * (x + 1.0) / ((1.0 - w) * Dw2);
  m[1][0] = w * (alpha * (w - 1.0) - x) / (b * Dw3);
  m[1][1] = ((x + w) * Dw - 2.0 * (alpha + 1.0) * w * (x + 0.5 * w)) / ((1.0 - w) * Dw3);
  return make_jacobian(m);
}

ZkEquilibrium zk_equilibrium(double r, double alpha, double b) {
  ZkEquilibrium out;
  const double c = std::cbrt(r);
  out.margin = alpha - (c + c * c);
  out.exists = out.margin > 0.0;

  const double x_lo = r / (alpha + 1.0);
  auto h = [&](double x) { return zk_cubic_w(x, r) - zk_hyperbola_w(x, r, alpha); };

  // g2 - g1 decreases from +inf at x_lo to -inf; scan log-spaced offsets.
  constexpr int kProbes = 2048;
  const double scale = std::max(x_lo, 1e-3);
  double prev_x = x_lo;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int k = 0; k < kProbes; ++k) {
    const double off = scale * std::pow(10.0, -12.0 + 18.0 * k / (kProbes - 1));
    const double x = x_lo + off;
    if (x <= x_lo) continue;
    if (h(x) < 0.0) {
      lo = prev_x;
      hi = x;
      bracketed = prev_x > x_lo;
      break;
    }
    prev_x = x;
  }
  if (!bracketed) {
    if (out.exists)
      throw Error(Errc::NotFound, "hyperbola/cubic intersection not bracketed at r = " +
                                      format_real(r) + ", alpha = " + format_real(alpha));
    return out;
  }

  double x0 = bisect(h, lo, hi, 1e-12 * std::max(1.0, hi));
  x0 = newton_polish(h, x0);
  out.x0 = x0;
  out.w0 = zk_hyperbola_w(x0, r, alpha);
  out.geometric_exists = out.w0 > 0.0 && out.w0 < alpha / (alpha + 1.0);
  out.hyperbola_residual = zk_hyperbola_residual(x0, out.w0, r, alpha);
  out.cubic_residual = zk_cubic_residual(x0, out.w0, r);

  if (out.w0 >= 0.0 && out.w0 < 1.0) {
    out.phi2_0 = (2.0 * out.w0 - out.w0 * out.w0) / (2.0 * b);
    const MapParams p = MapParams::symmetric(r, alpha, b);
    MapStep st = try_symmetric_map({x0, out.phi2_0}, p);
    out.fixed_point_residual =
        st.ok() ? std::max(std::abs(st.s.phi1 - x0), std::abs(st.s.phi2 - out.phi2_0))
                : std::numeric_limits<double>::infinity();
    out.jacobian = symmetric_jacobian_hybrid(x0, out.w0, r, alpha, b);
    out.one_minus_tr_plus_det = 1.0 - out.jacobian.trace() + out.jacobian.det();
    out.unstable = out.one_minus_tr_plus_det < 0.0;
  }
  return out;
}

ReducedState p_up(double b) { return {0.0, 1.0 / (2.0 * b)}; }

PUpCheck p_up_check(double r, double alpha, double b, double eps) {
  PUpCheck out;
  const MapParams p = MapParams::symmetric(r, alpha, b);
  const ReducedState up = p_up(b);
  const ReducedState img = symmetric_map(up, p);
  out.fixed_residual = std::max(std::abs(img.phi1 - up.phi1), std::abs(img.phi2 - up.phi2));
  const ReducedState below{0.0, up.phi2 - eps};
  out.dy_f2_below = one_collision_partials(below, r, alpha, b, 1.0).dy_f2;
  out.y_before = below.phi2;
  out.y_after = symmetric_map(below, p).phi2;
  out.repelled = std::abs(out.y_after - up.phi2) > std::abs(out.y_before - up.phi2);
  return out;
}

LowEnergyEquilibria low_energy_equilibria(double R, double alpha) {
  LowEnergyEquilibria out;
  const double disc = 1.0 - 4.0 * R;
  if (std::abs(disc) <= kDoubleRootTol) {
    out.kind = FixedPointKind::Double;
    out.X_minus = out.X_plus = 0.5;
  } else if (disc > 0.0) {
    out.kind = FixedPointKind::Pair;
    const double plus = 0.5 * (1.0 + std::sqrt(disc));
    out.X_plus = plus;
    out.X_minus = R / plus;
  } else {
    return out;
  }
  const double xm = *out.X_minus;
  const double v = 1.0 - xm - R;
  out.C = (R / (alpha * alpha)) * xm / ((1.0 - xm) * v * v);
  return out;
}

Jacobian2 low_energy_jacobian(LowEnergyState s, double R, double alpha) {
  const double u = 1.0 - s.X;
  const double v = u - R;
  if (std::abs(u) < kSingularDenominator || std::abs(v) < kSingularDenominator)
    throw Error(Errc::SingularDenominator, "1 - X or 1 - X - R vanishes");
  const double k = R / (alpha * alpha);
  std::array<std::array<double, 2>, 2> m{};
  m[0][0] = R * R / (v * v);
  m[0][1] = 0.0;
  m[1][0] = k * s.Y / (u * v * v) * (1.0 + s.X / u + 2.0 * s.X / v);
  m[1][1] = k * s.X / (u * v * v);
  return make_jacobian(m);
}

Jacobian2 low_energy_jacobian_fd(LowEnergyState s, double R, double alpha) {
  std::array<std::array<double, 2>, 2> m{};
  for (int j = 0; j < 2; ++j) {
    const double base = j == 0 ? s.X : s.Y;
    const double h = 1e-7 * std::max(std::abs(base), 1.0);
    LowEnergyState plus = s, minus = s;
    (j == 0 ? plus.X : plus.Y) += h;
    (j == 0 ? minus.X : minus.Y) -= h;
    const LowEnergyState fp = low_energy_map(plus, R, alpha);
    const LowEnergyState fm = low_energy_map(minus, R, alpha);
    m[0][j] = (fp.X - fm.X) / (2.0 * h);
    m[1][j] = (fp.Y - fm.Y) / (2.0 * h);
  }
  return make_jacobian(m);
}

double r_exist() { return 7.0 - 4.0 * std::sqrt(3.0); }
double r_stabi() { return 9.0 - 4.0 * std::sqrt(5.0); }

ZkAngleConditions zk_angle_conditions(double r, double theta) {
  ZkAngleConditions out;
  out.minus_cos = -std::cos(theta);
  out.exist_bound = 4.0 * std::sqrt(r) / (1.0 + r);
  const double c = std::cbrt(r);
  out.stable_bound = 2.0 * c * (1.0 + c) / (1.0 + r);
  out.exists_ok = out.minus_cos >= out.exist_bound;
  out.stable_ok = out.minus_cos > out.stable_bound;
  return out;
}

double inflection_polynomial(double x, double r) {
  const double r2 = r * r;
  return (((27.0 * r2 + 5.0) * x + (45.0 * r2 + 3.0)) * x + 24.0 * r2) * x + 4.0 * r2;
}

CubicBranchDiagnostics cubic_branch_diagnostics(double r, int samples) {
  CubicBranchDiagnostics out;
  out.r = r;
  out.samples = samples;
  out.g2_strictly_decreasing = true;
  out.q_positive = true;
  out.q_min = std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const double x = std::pow(10.0, -6.0 + 9.0 * k / std::max(1, samples - 1));
    const double g = zk_cubic_w(x, r);
    if (!(g < prev)) out.g2_strictly_decreasing = false;
    prev = g;
    // Q is sampled on [0, 1e3]: the origin plus the same log grid.
    const double q = inflection_polynomial(k == 0 ? 0.0 : x, r);
    out.q_min = std::min(out.q_min, q);
    if (!(q > 0.0)) out.q_positive = false;
  }
  auto mu_eq = [&](double m) { return r * r * m * m * m + m + 2.0; };
  out.mu = newton_polish(mu_eq, bisect(mu_eq, -2.0 / r - 2.0, 0.0));
  out.mu_in_range = out.mu > -1.0 / r && out.mu < -1.0;
  out.anchor_value = zk_cubic_w(std::cbrt(r * r), r);
  return out;
}

}  // namespace collapse
