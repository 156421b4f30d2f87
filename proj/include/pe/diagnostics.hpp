#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pe/field.hpp"

namespace pe {

/// One time sample of the monitored quantities of the difference field v_d.
struct DiagnosticsRecord {
  double t = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
  double h4 = 0.0;
  double l4_baroclinic = 0.0;  // ||v_d - vbar_d||_{L4}
  double energy = 0.0;         // ||v_d||_{L2}^2
  double jensen_slack = 0.0;   // 2 h^2 ||grad_H v||^2 - ||w||^2
  double poincare_slack = 0.0; // h ||dz v|| - ||v||
  double barotropic_h1 = 0.0;  // ||grad_H vbar||_{L2(T^2)}
  double bilinear_ratio_k0 = 0.0;  // NaN when undefined (zero field)
  double boundary_top = 0.0;       // ||dz v(z=0)||_{L2(T^2)}
  double boundary_bottom = 0.0;    // ||v(z=-h)||_{L2(T^2)}
};

DiagnosticsRecord record(const Field& v_d, double t);

struct DecayFit {
  double amplitude = 0.0;  // C
  double rate = 0.0;       // omega
  double r2 = 0.0;
};

/// Least-squares fit of ln(value) = ln C + omega t over the samples after the
/// leading `transient_fraction` of the series.
/// Throws ValidationError("insufficient data") for fewer than 5 samples and
/// ValidationError("nonpositive values") if any value is <= 0.
DecayFit decay_fit(std::span<const std::pair<double, double>> series,
                   double transient_fraction = 0.2);

struct MonotoneReport {
  bool pass = true;
  std::optional<std::size_t> first_violation;  // index n + 1 of the first uptick
};

/// Passes iff e[n+1] <= e[n] (1 + tol) for all n.
MonotoneReport check_energy_monotone(std::span<const double> energy, double tol = 1e-10);
MonotoneReport check_energy_monotone(std::span<const DiagnosticsRecord> series, double tol = 1e-10);

struct HkReport {
  double max_norm = 0.0;    // max_t ||v_d||_{H^k}
  double integral = 0.0;    // trapezoid int ||v_d||_{H^{k+1}}^2 dt
  bool finite = true;
  bool tail_monotone = true;  // H^k norm non-increasing after the transient
};

HkReport hk_boundedness(std::span<const DiagnosticsRecord> series, int k,
                        double transient_fraction = 0.2);

/// Norm of order k (0..4) stored in a record.
double record_norm(const DiagnosticsRecord& r, int k);

}  // namespace pe
