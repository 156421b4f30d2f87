#pragma once

#include <array>

namespace pe {

using Vec2 = std::array<double, 2>;

/// One physical scenario: viscosities, rotation, gravity, layer depth,
/// surface shear, geostrophic velocity and horizontal periods.
///
/// `tau` is a shear (1/s): the surface condition is dz v = tau directly, no
/// stress-to-shear conversion is applied.
struct PhysicalParams {
  double nu_h = 0.1;
  double nu_z = 0.1;
  double f = 1.0;
  double rho0 = 1000.0;
  double g = 9.81;
  double h = 1.0;
  Vec2 tau{0.0, 0.0};
  Vec2 v_g{0.0, 0.0};
  double lx = 6.283185307179586;
  double ly = 6.283185307179586;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

/// Finite-depth Ekman spiral
///
///   v1 = k1 sin(z/d) e^{-z/d} + k2 cos(z/d) e^{-z/d} + k3 sin(z/d) e^{z/d} + k4 cos(z/d) e^{z/d}
///   v2 = k1 cos(z/d) e^{-z/d} - k2 sin(z/d) e^{-z/d} - k3 cos(z/d) e^{z/d} + k4 sin(z/d) e^{z/d}
///
/// which solves nu_z v'' = |f| v^perp. For f < 0 the coefficients describe
/// the mirrored problem (second components negated) and `mirrored` is set;
/// profile() and derivative() undo the mirror.
struct EkmanSolution {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double k4 = 0.0;
  double d = 1.0;
  bool mirrored = false;
  PhysicalParams params;

  Vec2 profile(double z) const;
  Vec2 derivative(double z) const;
  /// Hydrostatic equilibrium pressure -rho0 g z.
  double pressure(double z) const;
};

double layer_thickness(const PhysicalParams& params);

EkmanSolution ekman_coefficients(const PhysicalParams& params);

Vec2 ekman_profile(const EkmanSolution& sol, double z);

Vec2 ekman_derivative(const EkmanSolution& sol, double z);

/// Upper bound on sup_z |dz v_E(z)|^2 from the triangle inequality.
double sup_derivative_bound(const EkmanSolution& sol);

struct Smallness {
  double c_e = 0.0;
  bool stable = true;  // c_e < 1
};

/// The constant C_E whose being below one puts the Ekman spiral in the
/// exponentially stable regime.
Smallness smallness_constant(const PhysicalParams& params);

}  // namespace pe
