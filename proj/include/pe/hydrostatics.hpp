#pragma once

#include "pe/field.hpp"
#include "pe/model.hpp"

namespace pe {

/// Barotropic mode: (1/h) times the depth integral. Spectral repr.
BarotropicField vertical_average(const Field& v);

/// Baroclinic mode v - vbar, returned in the representation of v.
Field baroclinic_part(const Field& v);

/// Vertical velocity w(v) = -int_{-h}^{z} div_H v. Spectral repr.
ScalarField reconstruct_w(const Field& v);

/// Hydrostatic Helmholtz projection: removes grad_H Lap_H^{-1} div_H vbar,
/// a z-independent correction, from every level. Mode (0,0) is untouched.
/// Returned in the representation of v.
Field project(const Field& v);

/// random_field(...) moved into the projected space without breaking either
/// boundary condition: the divergent part of vbar is removed with the
/// vertical shape 1 - (z/h)^2 instead of a constant. Physical repr, rescaled
/// to the requested nodal maximum.
Field solenoidal_random_field(const GridPtr& grid, std::uint64_t seed, double amplitude,
                              double slope);

/// ||div_H vbar||_{L2(T^2)}.
double barotropic_divergence(const Field& v);

/// ||grad_H vbar||_{L2(T^2)}.
double barotropic_gradient_norm(const Field& v);

/// Pressure recovered diagnostically from a velocity in the projected space.
struct PressureSolution {
  /// Surface pressure pi_s with zero horizontal mean (spectral repr).
  SurfaceField surface;
  double rho0 = 0.0;
  double g = 0.0;
  /// ||Lap_H pi_s / rho0 - r||_{L2(T^2)} where r is the divergence of the
  /// depth-averaged momentum balance (bottom drag, depth-integrated advection
  /// in flux form and Coriolis). Zero when the surface-pressure formula used
  /// here agrees with the momentum equation for this v.
  double momentum_residual = 0.0;

  /// Full pressure pi_s(x, y) - rho0 g z at grid point (ix, iy, z).
  double full(int ix, int iy, double z) const;
};

/// Solves
///   Lap_H pi_s = rho0 ( -(nu_z/h) div_H(dz v|_{z=-h})
///                       + (1/h) div_H int_{-h}^{0} (v . grad_H v - v div_H v) dz )
/// per horizontal mode with the (0,0) mode pinned to zero.
/// Rejects input with ||div_H vbar|| > 1e-8 (1 + ||v||).
PressureSolution recover_pressure(const Field& v, const PhysicalParams& params);

}  // namespace pe
