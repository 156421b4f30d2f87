#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "pe/config.hpp"

namespace pe {

/// Command-line overrides shared by the subcommands.
struct Overrides {
  std::optional<double> horizon;
  std::optional<int> krylov;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

/// Project version string recorded in manifests.
const char* code_version();

/// Applies overrides and re-validates. A Krylov dimension below 2 is a
/// ValidationError.
RunConfig apply_overrides(RunConfig cfg, const Overrides& o);

/// Prints d, k1..k4, the sup bound of dz^2 v_E, C_E and the verdict.
/// Returns kExitOk iff C_E < 1, else kExitValidation.
int cmd_check(const RunConfig& cfg, std::ostream& out);

/// Writes "z,v1,v2,dv1dz,dv2dz" at `samples` uniformly spaced depths from
/// -h to 0 (17 significant digits).
int cmd_ekman(const RunConfig& cfg, int samples, const std::string& path, std::ostream& out);

/// Runs the simulation into out_dir: series.csv (flushed per row),
/// snapshot_<step>.pesn files and, last, manifest.txt. A SolverError is
/// recorded in the manifest and yields kExitRuntime.
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, std::ostream& out);

/// Estimates the spectral bound. kExitNotConverged if the Ritz residual
/// stays above tol.
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);

/// Runs the built-in invariant checks on the configured grid. Returns
/// kExitOk if all pass, else kExitRuntime.
int cmd_verify(const RunConfig& cfg, std::ostream& out);

/// CSV header of series.csv.
inline constexpr const char* kSeriesHeader =
    "t,l2,h1,h2,h3,l4_tilde,energy,jensen_slack,poincare_slack,barotropic_h1,bilinear_ratio_k0";

std::string format_series_row(const DiagnosticsRecord& r);

}  // namespace pe
