#pragma once

#include <array>
#include <complex>
#include <optional>

#include "collapse/reduced_maps.hpp"

namespace collapse {

enum class FixedPointKind { None, Double, Pair };
std::string_view to_string(FixedPointKind k) noexcept;

// Fixed points of phi -> r/(alpha - phi) on the invariant line phi2 = 0.
struct BoundaryFixedPoints {
  FixedPointKind kind = FixedPointKind::None;
  std::optional<double> phi_minus;
  std::optional<double> phi_plus;
};

BoundaryFixedPoints boundary_fixed_points(double r, double alpha);

// Two-collision map restricted to phi2 = 0. Throws SingularDenominator at
// phi1 = alpha - r/alpha.
double phi2zero_step(double phi1, double r, double alpha);
double phi2zero_derivative(double phi1, double r, double alpha);

struct Jacobian2 {
  std::array<std::array<double, 2>, 2> m{};
  std::array<std::complex<double>, 2> eigenvalues{};
  double spectral_radius = 0.0;

  double trace() const { return m[0][0] + m[1][1]; }
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

Jacobian2 make_jacobian(const std::array<std::array<double, 2>, 2>& m);

// Diagonal entries of the two-collision Jacobian on phi2 = 0.
double lambda1(double phi1, double r, double alpha);
double lambda2(double phi1, double r, double alpha);

// Analytic triangular matrix on phi2 = 0, centered differences elsewhere.
Jacobian2 jacobian_two_collision(ReducedState s, const MapParams& p);
Jacobian2 jacobian_two_collision_fd(ReducedState s, const MapParams& p);
// Product of the analytic one-collision factors.
Jacobian2 jacobian_two_collision_chain(ReducedState s, const MapParams& p);
Jacobian2 jacobian_symmetric_fd(ReducedState s, const MapParams& p);

// P(x) = alpha^2 x^3 - alpha(3 alpha^2 - 2r) x^2 + ((alpha^2-r)(3alpha^2-r)+r) x
//        - alpha (alpha^2 - r)^2; its zero is where lambda2 crosses 1.
double stability_polynomial_value(double x, double r, double alpha);

struct StabilityPolynomial {
  std::array<double, 4> coeffs{};  // c0 + c1 x + c2 x^2 + c3 x^3
  double P_zero = 0.0;
  double P_minus = 0.0;
  double P_plus = 0.0;
  double phi_minus = 0.0;
  double phi_plus = 0.0;
  double root = 0.0;  // bar phi1 in (phi_minus, phi_plus)
};

// Throws BracketFailed if the sign pattern P(phi-) < 0 < P(phi+) fails or the
// boundary fixed points are not a pair.
StabilityPolynomial stability_polynomial(double r, double alpha);

// Hyperbola branch and cubic branch of the symmetric fixed-point equations in
// the hybrid variables (x, w).
double zk_hyperbola_w(double x, double r, double alpha);
double zk_cubic_w(double x, double r);
double zk_hyperbola_residual(double x, double w, double r, double alpha);
double zk_cubic_residual(double x, double w, double r);

// Symmetric-map Jacobian in (phi1, phi2) at a hybrid point (x, w).
Jacobian2 symmetric_jacobian_hybrid(double x, double w, double r, double alpha, double b);

struct ZkEquilibrium {
  bool exists = false;            // r^(1/3) + r^(2/3) < alpha
  double margin = 0.0;            // alpha - r^(1/3) - r^(2/3)
  bool geometric_exists = false;  // intersection lies in 0 < w < alpha/(alpha+1)
  double x0 = 0.0;
  double w0 = 0.0;
  double phi2_0 = 0.0;
  double hyperbola_residual = 0.0;
  double cubic_residual = 0.0;
  double fixed_point_residual = 0.0;  // only meaningful when w0 in [0,1]
  Jacobian2 jacobian;
  double one_minus_tr_plus_det = 0.0;
  bool unstable = false;  // 1 - Tr + det < 0
};

// Throws NotFound if the criterion says the equilibrium exists but the
// intersection cannot be bracketed.
ZkEquilibrium zk_equilibrium(double r, double alpha, double b = 1.0);

ReducedState p_up(double b);

struct PUpCheck {
  double fixed_residual = 0.0;
  double dy_f2_below = 0.0;  // d f2/dy at (0, 1/(2b) - eps)
  double y_before = 0.0;
  double y_after = 0.0;
  bool repelled = false;     // |y_after - y_up| > |y_before - y_up|
};

PUpCheck p_up_check(double r, double alpha, double b, double eps = 1e-4);

struct LowEnergyEquilibria {
  FixedPointKind kind = FixedPointKind::None;
  std::optional<double> X_minus;
  std::optional<double> X_plus;
  std::optional<double> C;  // vertical multiplier at (X-, 0)
};

LowEnergyEquilibria low_energy_equilibria(double R, double alpha);
Jacobian2 low_energy_jacobian(LowEnergyState s, double R, double alpha);
Jacobian2 low_energy_jacobian_fd(LowEnergyState s, double R, double alpha);

double r_exist();  // 7 - 4 sqrt(3)
double r_stabi();  // 9 - 4 sqrt(5)

struct ZkAngleConditions {
  bool exists_ok = false;
  bool stable_ok = false;
  double exist_bound = 0.0;   // 4 sqrt(r) / (1 + r)
  double stable_bound = 0.0;  // 2 r^(1/3)(1 + r^(1/3)) / (1 + r)
  double minus_cos = 0.0;
};

ZkAngleConditions zk_angle_conditions(double r, double theta);

struct CubicBranchDiagnostics {
  double r = 0.0;
  int samples = 0;
  bool g2_strictly_decreasing = false;
  bool q_positive = false;
  double q_min = 0.0;
  double mu = 0.0;
  bool mu_in_range = false;  // -1/r < mu < -1
  double anchor_value = 0.0;  // g2(r^(2/3)), expected 0
};

double inflection_polynomial(double x, double r);  // Q_r(x)
CubicBranchDiagnostics cubic_branch_diagnostics(double r, int samples = 10000);

}  // namespace collapse
