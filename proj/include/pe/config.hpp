#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pe/model.hpp"
#include "pe/solver.hpp"

namespace pe {

struct SpectrumConfig {
  double horizon = 0.0;  // <= 0 selects 1/|f|
  int krylov = 20;
  double tol = 1e-6;
};

struct RunConfig {
  PhysicalParams physics;
  SimConfig sim;
  SpectrumConfig spectrum;
};

/// Plain-text `key = value` file with dotted keys; '#' starts a comment.
///
/// Required: physics.{nu_h,nu_z,f,rho0,g,h,tau1,tau2,vg1,vg2,lx,ly},
///           sim.{dt,t_end,nx,ny,nz}.
/// Optional: sim.{output_every,snapshot_every,mode}, init.{seed,amplitude,
///           slope,snapshot}, spectrum.{horizon,krylov,tol}.
///
/// Unknown, duplicate or missing keys and malformed lines throw
/// ValidationError; parse errors carry "line N".
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Throws ValidationError naming the offending key.
void validate(const RunConfig& cfg);

/// Every key with its effective value, in canonical order; values use 17
/// significant digits so the echo parses back to the same config.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg);

std::string to_config_text(const RunConfig& cfg);

}  // namespace pe
