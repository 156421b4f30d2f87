#include "pe/model.hpp"

#include <cmath>
#include <string>

#include "pe/errors.hpp"

namespace pe {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ValidationError(std::string(name) + " must be finite and > 0 (got " +
                          std::to_string(value) + ")");
  }
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

// Largest admissible 2h/d before e^{2h/d} in the smallness constant overflows.
constexpr double kMaxDepthRatio = 600.0;

void check_height(const EkmanSolution& sol, double z) {
  const double h = sol.params.h;
  const double slack = 1e-12 * h;
  if (!(z >= -h - slack && z <= slack)) {
    throw ValidationError("z = " + std::to_string(z) + " outside [-h, 0]");
  }
}

double bracket(const EkmanSolution& s) {
  return (s.k1 * s.k1 + s.k2 * s.k2) * std::exp(2.0 * s.params.h / s.d) +
         (s.k3 * s.k3 + s.k4 * s.k4) + 2.0 * std::abs(s.k1 * s.k3 - s.k2 * s.k4) +
         2.0 * std::abs(s.k2 * s.k3 + s.k1 * s.k4);
}

}  // namespace

void PhysicalParams::validate() const {
  require_positive(nu_h, "nu_h");
  require_positive(nu_z, "nu_z");
  require_positive(h, "h");
  require_positive(rho0, "rho0");
  require_positive(g, "g");
  require_positive(lx, "lx");
  require_positive(ly, "ly");
  require_finite(f, "f");
  require_finite(tau[0], "tau1");
  require_finite(tau[1], "tau2");
  require_finite(v_g[0], "vg1");
  require_finite(v_g[1], "vg2");
  if (f == 0.0) throw ValidationError("f = 0: Ekman thickness undefined");
}

double layer_thickness(const PhysicalParams& params) {
  if (!std::isfinite(params.f) || !std::isfinite(params.nu_z)) {
    throw ValidationError("f and nu_z must be finite");
  }
  if (params.f == 0.0) throw ValidationError("f = 0: Ekman thickness undefined");
  require_positive(params.nu_z, "nu_z");
  return std::sqrt(2.0 * params.nu_z / std::abs(params.f));
}

EkmanSolution ekman_coefficients(const PhysicalParams& params) {
  params.validate();
  const double d = layer_thickness(params);
  if (2.0 * params.h / d > kMaxDepthRatio) {
    throw RangeError("2h/d = " + std::to_string(2.0 * params.h / d) +
                     " exceeds 600; e^{2h/d} would overflow");
  }

  EkmanSolution sol;
  sol.d = d;
  sol.params = params;
  sol.mirrored = params.f < 0.0;
  const double sgn = sol.mirrored ? -1.0 : 1.0;
  const double t1 = params.tau[0];
  const double t2 = sgn * params.tau[1];
  const double g1 = params.v_g[0];
  const double g2 = sgn * params.v_g[1];

  // Closed form divided through by e^{4h/d}, written in q = e^{-h/d} so that
  // nothing overflows for deep layers.
  const double a = params.h / d;
  const double q = std::exp(-a);
  const double q2 = q * q;
  const double q3 = q2 * q;
  const double q4 = q2 * q2;
  const double s1 = std::sin(a);
  const double c1 = std::cos(a);
  const double s2 = std::sin(2.0 * a);
  const double c2 = std::cos(2.0 * a);
  const double den = 2.0 * (1.0 + 2.0 * q2 * c2 + q4);

  sol.k1 = (-2.0 * (q - q3) * s1 * g1 + 2.0 * (q + q3) * c1 * g2 +
            d * (q2 * s2 + q2 * c2 + q4) * t1 - d * (-q2 * s2 + q2 * c2 + q4) * t2) /
           den;
  sol.k2 = (2.0 * (q + q3) * c1 * g1 + 2.0 * (q - q3) * s1 * g2 -
            d * (-q2 * s2 + q2 * c2 + q4) * t1 - d * (q2 * s2 + q2 * c2 + q4) * t2) /
           den;
  sol.k3 = (2.0 * (q - q3) * s1 * g1 - 2.0 * (q + q3) * c1 * g2 +
            d * (1.0 + (c2 - s2) * q2) * t1 - d * (1.0 + (s2 + c2) * q2) * t2) /
           den;
  sol.k4 = (2.0 * (q + q3) * c1 * g1 + 2.0 * (q - q3) * s1 * g2 +
            d * (1.0 + (s2 + c2) * q2) * t1 + d * (1.0 + (c2 - s2) * q2) * t2) /
           den;
  return sol;
}

Vec2 EkmanSolution::profile(double z) const {
  check_height(*this, z);
  const double zeta = z / d;
  const double s = std::sin(zeta);
  const double c = std::cos(zeta);
  const double em = std::exp(-zeta);
  const double ep = std::exp(zeta);
  const double v1 = k1 * s * em + k2 * c * em + k3 * s * ep + k4 * c * ep;
  const double v2 = k1 * c * em - k2 * s * em - k3 * c * ep + k4 * s * ep;
  return {v1, mirrored ? -v2 : v2};
}

Vec2 EkmanSolution::derivative(double z) const {
  check_height(*this, z);
  const double zeta = z / d;
  const double s = std::sin(zeta);
  const double c = std::cos(zeta);
  const double em = std::exp(-zeta);
  const double ep = std::exp(zeta);
  const double dv1 = (k1 * (c - s) * em + k2 * (-s - c) * em + k3 * (s + c) * ep +
                      k4 * (c - s) * ep) /
                     d;
  const double dv2 = (k1 * (-s - c) * em + k2 * (s - c) * em + k3 * (s - c) * ep +
                      k4 * (s + c) * ep) /
                     d;
  return {dv1, mirrored ? -dv2 : dv2};
}

double EkmanSolution::pressure(double z) const { return -params.rho0 * params.g * z; }

Vec2 ekman_profile(const EkmanSolution& sol, double z) { return sol.profile(z); }

Vec2 ekman_derivative(const EkmanSolution& sol, double z) { return sol.derivative(z); }

double sup_derivative_bound(const EkmanSolution& sol) {
  return 2.0 / (sol.d * sol.d) * bracket(sol);
}

Smallness smallness_constant(const PhysicalParams& params) {
  const EkmanSolution sol = ekman_coefficients(params);
  const double h2 = params.h * params.h;
  Smallness out;
  out.c_e = std::abs(params.f) * h2 * h2 / (2.0 * params.nu_h * params.nu_z * params.nu_z) *
            bracket(sol);
  out.stable = out.c_e < 1.0;
  return out;
}

}  // namespace pe
