#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pe/diagnostics.hpp"
#include "pe/field.hpp"
#include "pe/model.hpp"
#include "pe/operator.hpp"

namespace pe {

enum class Mode { nonlinear, linear };

struct InitialCondition {
  std::uint64_t seed = 0;
  double amplitude = 0.0;  // nodal max of v_0 - v_E; 0 starts on the Ekman spiral
  double slope = 2.0;
  std::string snapshot;    // if set, v_0 is read from this file instead
};

struct SimConfig {
  double dt = 0.01;
  double t_end = 1.0;
  int nx = 32;
  int ny = 32;
  int nz = 48;
  int output_every = 10;
  int snapshot_every = 0;  // 0: final snapshot only
  InitialCondition init;
  Mode mode = Mode::nonlinear;

  /// dt > 0, dt |f| <= 0.5, t_end >= dt, cadences >= 0, amplitude >= 0.
  void validate(const PhysicalParams& params) const;
  long steps() const;
};

/// Evolving difference v_d = v - v_E.
struct SimState {
  Field v_d;  // spectral repr, dealiased, projected, boundary-respecting
  double t = 0.0;
  Field prev_tendency;
  bool has_prev = false;
  long step_index = 0;
};

/// CNAB2 stepper for the Ekman-primitive equations.
///
/// Diffusion is Crank–Nicolson, Coriolis, Ekman coupling and advection are
/// Adams–Bashforth 2 (explicit Euler on the first step). Every horizontal
/// mode is advanced by a collocation solve whose first and last rows carry
/// dz v(0) = 0 and v(-h) = 0. The z-independent pressure gradient is the
/// Lagrange multiplier of div_H vbar = 0 and is eliminated with a
/// precomputed influence column, so the new state satisfies the boundary
/// conditions and the hydrostatic constraint together.
class Stepper {
 public:
  Stepper(const LinearizedOp& op, double dt, Mode mode);
  ~Stepper();
  Stepper(Stepper&&) noexcept;

  double dt() const { return dt_; }
  Mode mode() const { return mode_; }
  const LinearizedOp& op() const { return *op_; }

  /// Dealiases v, then applies one implicit half step of the constrained
  /// diffusion, which projects and enforces both boundary conditions.
  Field admit(const Field& v) const;

  /// True if v is dealiased, projected and boundary-respecting to the state
  /// tolerances.
  bool admissible(const Field& v) const;

  SimState initial_state(const Field& v_d0, bool smooth = true) const;

  /// Advances one dt. Throws SolverError on NaN, CFL violation or a broken
  /// state invariant.
  void step(SimState& state);

 private:
  struct Impl;
  const LinearizedOp* op_;
  double dt_;
  Mode mode_;
  std::unique_ptr<Impl> impl_;
};

/// Convenience single step; builds a Stepper (factorizations included).
SimState step(const SimState& state, const SimConfig& cfg, const LinearizedOp& op);

/// Evolves v under dv/dt = A v for round(horizon/dt) steps. Inadmissible
/// input is first passed through Stepper::admit.
Field propagate_linear(const LinearizedOp& op, const Field& v, double horizon, double dt);

/// Same, reusing an existing linear-mode stepper and skipping admission.
Field propagate_admitted(Stepper& stepper, const Field& v, long steps);

struct SimObserver {
  std::function<void(const DiagnosticsRecord&)> on_record;
  /// Full velocity v = v_d + v_E in physical repr.
  std::function<void(const Field&, double t, long step)> on_snapshot;
};

struct SimResult {
  std::vector<DiagnosticsRecord> records;
  Smallness verdict;
  bool initial_smoothing = true;
  SimState final_state;
  long steps = 0;
};

/// v_0 from cfg.init: either v_E + random_field(...) or a snapshot.
Field initial_velocity(const SimConfig& cfg, const LinearizedOp& op);

/// Full velocity v_d + v_E in physical repr.
Field full_velocity(const Field& v_d, const LinearizedOp& op);

/// Time-marches v_d = v - v_E from v_0 - v_E. Records are emitted at step 0,
/// every output_every steps and at the final step. Step failures propagate
/// as SolverError carrying the failing step index.
SimResult simulate(const SimConfig& cfg, const PhysicalParams& params,
                   const SimObserver& observer = {});

}  // namespace pe
