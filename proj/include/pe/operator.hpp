#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "pe/field.hpp"
#include "pe/model.hpp"

namespace pe {

/// Linearization of the primitive equations about the Ekman spiral on a
/// fixed grid. Holds v_E and dz v_E sampled on the Lobatto nodes.
class LinearizedOp {
 public:
  LinearizedOp(const PhysicalParams& params, GridPtr grid);

  const PhysicalParams& params() const { return params_; }
  const EkmanSolution& ekman() const { return ekman_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }

  /// v_E and dz v_E at Lobatto node k, component c.
  double profile(std::size_t c, int k) const { return profile_[c][k]; }
  double shear(std::size_t c, int k) const { return shear_[c][k]; }

  /// nu_H Lap_H v + nu_z dz^2 v, unprojected, spectral repr.
  Field diffusion(const Field& v) const;

  /// -(v_E . grad_H v + w(v) dz v_E) - f v^perp, unprojected, spectral repr.
  /// Exact per mode; no products in physical space are needed.
  Field coupling(const Field& v) const;

  /// Adds coupling(v) for one horizontal mode (spectral columns) into out.
  void add_coupling(int ix, int iy, const cplx* v1, const cplx* v2, cplx* out1, cplx* out2,
                    std::vector<cplx>& scratch) const;

 private:
  PhysicalParams params_;
  EkmanSolution ekman_;
  GridPtr grid_;
  std::array<std::vector<double>, 2> profile_;
  std::array<std::vector<double>, 2> shear_;
};

/// v . grad_H vp + w(v) dz vp, products formed in physical space and
/// dealiased with the 2/3 rule. Spectral repr, unprojected.
Field advection(const Field& v, const Field& vp);

/// F(v, vp) = P(v . grad_H vp + w(v) dz vp).
Field apply_F(const Field& v, const Field& vp);

/// A v = P(nu_H Lap_H v + nu_z dz^2 v) - P(v_E . grad_H v + w(v) dz v_E) - P(f v^perp).
/// Boundary residuals above 1e-8 are reported through `boundary_warning`
/// (if non-null) rather than rejected.
Field apply_A(const LinearizedOp& op, const Field& v, bool* boundary_warning = nullptr);

/// Largest of |dz v(0)| and |v(-h)| over all columns, relative to 1 + ||v||_{L2}.
double boundary_residual(const Field& v);

/// Ratio monitoring the bilinear bounds: for k = 0
///   ||F(v,v)||_{L2} / ||v||_{H^{3/2}}^2,
/// for k in {1, 2}
///   ||F(v,v)||_{H^k} / (||v||_{H^{k+2}}^{1/2} ||v||_{H^{k+1}} ||v||_{H^k}^{1/2}).
/// Empty for the zero field.
std::optional<double> bilinear_ratio(const Field& v, int k);

struct SpectralBoundOptions {
  double horizon = 0.0;  // <= 0 selects 1/|f|
  int krylov_dim = 20;
  double tol = 1e-6;
  double dt = 0.01;
  unsigned long long seed = 1;
};

struct SpectralBound {
  double omega0 = 0.0;             // ln|lambda_max| / horizon of the horizon propagator
  double residual = 0.0;           // relative Ritz residual of lambda_max
  std::complex<double> ritz{};     // dominant eigenvalue estimate of the horizon propagator
  bool converged = false;          // residual <= tol
  bool complex_pair = false;       // dominant Ritz value is one of a conjugate pair
  bool unstable = false;           // omega0 >= 0
  int iterations = 0;              // Arnoldi steps taken
  double horizon = 0.0;
  int krylov_dim = 0;
};

/// Arnoldi iteration on the linear propagator exp(horizon A), realized by
/// the IMEX stepper with the nonlinearity switched off and followed by three
/// one-step averages that damp the Crank-Nicolson sign-flipping stiff modes. The
/// Krylov state is the two-level (velocity, lagged tendency) pair with the
/// L2 inner product. Stops early when the dominant Ritz residual drops
/// below tol; omega0 comes from the one-step Rayleigh quotient of the Ritz
/// vector.
/// Throws ValidationError if horizon < dt or krylov_dim < 2.
SpectralBound estimate_spectral_bound(const LinearizedOp& op, SpectralBoundOptions opts);

}  // namespace pe
