#include "pe/solver.hpp"

#include <cmath>
#include <map>

#include "pe/errors.hpp"
#include "pe/hydrostatics.hpp"
#include "pe/parallel.hpp"
#include "pe/snapshot.hpp"

namespace pe {

namespace {

constexpr double kDivergenceTol = 1e-9;
constexpr double kBoundaryTol = 1e-8;
constexpr double kMaxCfl = 0.8;

}  // namespace

void SimConfig::validate(const PhysicalParams& params) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sim.dt must be > 0");
  if (dt * std::abs(params.f) > 0.5)
    throw ValidationError("sim.dt: dt*|f| must be <= 0.5 (explicit rotation guard)");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw ValidationError("sim.t_end must be >= sim.dt");
  if (nx < 8 || nx % 2 != 0) throw ValidationError("sim.nx must be even and >= 8");
  if (ny < 8 || ny % 2 != 0) throw ValidationError("sim.ny must be even and >= 8");
  if (nz < 16) throw ValidationError("sim.nz must be >= 16");
  if (output_every < 1) throw ValidationError("sim.output_every must be >= 1");
  if (snapshot_every < 0) throw ValidationError("sim.snapshot_every must be >= 0");
  if (!(init.amplitude >= 0.0) || !std::isfinite(init.amplitude))
    throw ValidationError("init.amplitude must be >= 0");
  if (!std::isfinite(init.slope)) throw ValidationError("init.slope must be finite");
}

long SimConfig::steps() const { return std::lround(t_end / dt); }

// ---------------------------------------------------------------------------

struct Stepper::Impl {
  struct Group {
    Eigen::MatrixXd solve;  // inverse of the bordered CN matrix
    Eigen::VectorXd phi;    // response to a unit z-independent pressure gradient
    double phi_bar = 0.0;
  };
  struct ModeRef {
    int ix, iy;
    std::size_t group;
    double kk;
  };

  std::vector<Group> groups;
  std::vector<ModeRef> modes;
  // per-mode scratch outputs for deterministic reductions
  std::vector<double> div_sq, top_sq, bottom_sq;
  std::vector<char> bad;
};

Stepper::Stepper(const LinearizedOp& op, double dt, Mode mode)
    : op_(&op), dt_(dt), mode_(mode), impl_(std::make_unique<Impl>()) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  const Grid& g = op.grid();
  const auto& p = op.params();
  const int n = g.npts();
  std::map<std::pair<int, int>, std::size_t> by_key;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (!g.retained(ix, iy)) continue;
      const int mx = std::abs(g.wave_x(ix));
      const int my = std::abs(g.wave_y(iy));
      const auto key = std::make_pair(mx, my);
      auto it = by_key.find(key);
      const double kk = g.k2(ix, iy);
      if (it == by_key.end()) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) -
                            0.5 * dt * (p.nu_z * g.dz2() -
                                        p.nu_h * kk * Eigen::MatrixXd::Identity(n, n));
        m.row(0) = g.dz().row(0);
        m.row(n - 1).setZero();
        m(n - 1, n - 1) = 1.0;
        Impl::Group grp;
        grp.solve = m.partialPivLu().inverse();
        Eigen::VectorXd unit = Eigen::VectorXd::Ones(n);
        unit[0] = 0.0;
        unit[n - 1] = 0.0;
        grp.phi = grp.solve * unit;
        grp.phi_bar = g.weights().dot(grp.phi) / g.h();
        it = by_key.emplace(key, impl_->groups.size()).first;
        impl_->groups.push_back(std::move(grp));
      }
      impl_->modes.push_back({ix, iy, it->second, kk});
    }
  const std::size_t m = impl_->modes.size();
  impl_->div_sq.resize(m);
  impl_->top_sq.resize(m);
  impl_->bottom_sq.resize(m);
  impl_->bad.resize(m);
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;

namespace {

// Solves the bordered system for one mode in place: rhs columns (boundary
// rows already zero) -> constrained solution. Returns |k . ubar|^2 after the
// correction for monitoring.
void constrained_solve(const Grid& g, const Eigen::MatrixXd& solve, const Eigen::VectorXd& phi,
                       double phi_bar, double kx, double ky, double kk, cplx* r1, cplx* r2,
                       cplx* out1, cplx* out2) {
  const int n = g.npts();
  apply_vertical(solve, r1, out1);
  apply_vertical(solve, r2, out2);
  if (kk == 0.0) return;
  const double inv_h = 1.0 / g.h();
  const cplx u1 = column_integral(g, out1) * inv_h;
  const cplx u2 = column_integral(g, out2) * inv_h;
  const cplx iku = cplx(0.0, kx) * u1 + cplx(0.0, ky) * u2;
  const cplx q = -iku / (kk * phi_bar);
  const cplx c1 = q * cplx(0.0, kx);
  const cplx c2 = q * cplx(0.0, ky);
  for (int k = 0; k < n; ++k) {
    out1[k] -= c1 * phi[k];
    out2[k] -= c2 * phi[k];
  }
}

}  // namespace

Field Stepper::admit(const Field& v) const {
  const Grid& g = op_->grid();
  const Field s = dealias(transform(v, Repr::spectral));
  Field out(op_->grid_ptr(), Repr::spectral);
  const int n = g.npts();
  parallel_for(impl_->modes.size(), [&](std::size_t i) {
    const auto& md = impl_->modes[i];
    const auto& grp = impl_->groups[md.group];
    std::vector<cplx> r1(s.column(0, md.ix, md.iy), s.column(0, md.ix, md.iy) + n);
    std::vector<cplx> r2(s.column(1, md.ix, md.iy), s.column(1, md.ix, md.iy) + n);
    r1[0] = r1[n - 1] = r2[0] = r2[n - 1] = cplx{};
    constrained_solve(g, grp.solve, grp.phi, grp.phi_bar, g.kx(md.ix), g.ky(md.iy), md.kk,
                      r1.data(), r2.data(), out.column(0, md.ix, md.iy),
                      out.column(1, md.ix, md.iy));
  });
  return out;
}

bool Stepper::admissible(const Field& v) const {
  const Grid& g = op_->grid();
  const Field s = transform(v, Repr::spectral);
  const double norm = std::sqrt(l2_squared(s));
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (g.retained(ix, iy)) continue;
      for (std::size_t c = 0; c < 2; ++c) {
        const cplx* col = s.column(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k)
          if (std::abs(col[k]) > 1e-14 * (1.0 + norm)) return false;
      }
    }
  if (barotropic_divergence(s) > kDivergenceTol * (1.0 + norm)) return false;
  return boundary_residual(s) <= kBoundaryTol;
}

SimState Stepper::initial_state(const Field& v_d0, bool smooth) const {
  SimState st;
  st.v_d = smooth ? admit(v_d0) : dealias(transform(v_d0, Repr::spectral));
  st.prev_tendency = Field(op_->grid_ptr(), Repr::spectral);
  return st;
}

void Stepper::step(SimState& state) {
  const Grid& g = op_->grid();
  const auto& p = op_->params();
  const long step_no = state.step_index + 1;
  if (state.v_d.repr() != Repr::spectral) state.v_d.to(Repr::spectral);

  Field nonlinear;
  if (mode_ == Mode::nonlinear) {
    const Field phys = transform(state.v_d, Repr::physical);
    double vmax = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a = phys.comp(0)[i].real();
      const double b = phys.comp(1)[i].real();
      vmax = std::max(vmax, std::sqrt(a * a + b * b));
    }
    if (!std::isfinite(vmax)) throw SolverError("NaN detected", step_no);
    if (vmax * dt_ / g.min_horizontal_spacing() > kMaxCfl)
      throw SolverError("CFL violation", step_no);
    nonlinear = advection(state.v_d, state.v_d);
  }

  Field tendency(op_->grid_ptr(), Repr::spectral);
  Field next(op_->grid_ptr(), Repr::spectral);
  const int n = g.npts();
  const bool ab2 = state.has_prev;
  const double dt = dt_;

  parallel_for(impl_->modes.size(), [&](std::size_t i) {
    const auto& md = impl_->modes[i];
    const auto& grp = impl_->groups[md.group];
    const cplx* v1 = state.v_d.column(0, md.ix, md.iy);
    const cplx* v2 = state.v_d.column(1, md.ix, md.iy);
    cplx* n1 = tendency.column(0, md.ix, md.iy);
    cplx* n2 = tendency.column(1, md.ix, md.iy);
    std::vector<cplx> scratch;
    op_->add_coupling(md.ix, md.iy, v1, v2, n1, n2, scratch);
    if (mode_ == Mode::nonlinear) {
      const cplx* a1 = nonlinear.column(0, md.ix, md.iy);
      const cplx* a2 = nonlinear.column(1, md.ix, md.iy);
      for (int k = 0; k < n; ++k) {
        n1[k] -= a1[k];
        n2[k] -= a2[k];
      }
    }
    std::vector<cplx> r1(n), r2(n);
    apply_vertical(g.dz2(), v1, r1.data());
    apply_vertical(g.dz2(), v2, r2.data());
    const cplx* p1 = state.prev_tendency.column(0, md.ix, md.iy);
    const cplx* p2 = state.prev_tendency.column(1, md.ix, md.iy);
    for (int k = 0; k < n; ++k) {
      const cplx e1 = ab2 ? 1.5 * n1[k] - 0.5 * p1[k] : n1[k];
      const cplx e2 = ab2 ? 1.5 * n2[k] - 0.5 * p2[k] : n2[k];
      r1[k] = v1[k] + 0.5 * dt * (p.nu_z * r1[k] - p.nu_h * md.kk * v1[k]) + dt * e1;
      r2[k] = v2[k] + 0.5 * dt * (p.nu_z * r2[k] - p.nu_h * md.kk * v2[k]) + dt * e2;
    }
    r1[0] = r1[n - 1] = r2[0] = r2[n - 1] = cplx{};
    cplx* o1 = next.column(0, md.ix, md.iy);
    cplx* o2 = next.column(1, md.ix, md.iy);
    constrained_solve(g, grp.solve, grp.phi, grp.phi_bar, g.kx(md.ix), g.ky(md.iy), md.kk,
                      r1.data(), r2.data(), o1, o2);

    // invariant monitors
    const cplx u1 = column_integral(g, o1) / g.h();
    const cplx u2 = column_integral(g, o2) / g.h();
    impl_->div_sq[i] = std::norm(cplx(0.0, g.kx(md.ix)) * u1 + cplx(0.0, g.ky(md.iy)) * u2);
    cplx t1{}, t2{};
    for (int k = 0; k < n; ++k) {
      t1 += g.dz()(0, k) * o1[k];
      t2 += g.dz()(0, k) * o2[k];
    }
    impl_->top_sq[i] = std::norm(t1) + std::norm(t2);
    impl_->bottom_sq[i] = std::norm(o1[n - 1]) + std::norm(o2[n - 1]);
    bool finite = true;
    for (int k = 0; k < n; ++k)
      finite = finite && std::isfinite(o1[k].real()) && std::isfinite(o1[k].imag()) &&
               std::isfinite(o2[k].real()) && std::isfinite(o2[k].imag());
    impl_->bad[i] = finite ? 0 : 1;
  });

  double div = 0.0, top = 0.0, bottom = 0.0;
  for (std::size_t i = 0; i < impl_->modes.size(); ++i) {
    if (impl_->bad[i]) throw SolverError("NaN detected", step_no);
    div += impl_->div_sq[i];
    top += impl_->top_sq[i];
    bottom += impl_->bottom_sq[i];
  }
  const double area = g.lx() * g.ly();
  const double norm = std::sqrt(l2_squared(next));
  if (std::sqrt(div * area) > kDivergenceTol * (1.0 + norm))
    throw SolverError("hydrostatic constraint violated", step_no);
  if (std::sqrt(top * area) > kBoundaryTol * (1.0 + norm) ||
      std::sqrt(bottom * area) > kBoundaryTol * (1.0 + norm))
    throw SolverError("boundary condition violated", step_no);

  state.v_d = std::move(next);
  state.prev_tendency = std::move(tendency);
  state.has_prev = true;
  state.t += dt;
  state.step_index = step_no;
}

SimState step(const SimState& state, const SimConfig& cfg, const LinearizedOp& op) {
  Stepper stepper(op, cfg.dt, cfg.mode);
  SimState next = state;
  if (next.prev_tendency.empty()) next.prev_tendency = Field(op.grid_ptr(), Repr::spectral);
  stepper.step(next);
  return next;
}

Field propagate_admitted(Stepper& stepper, const Field& v, long steps) {
  SimState st = stepper.initial_state(v, false);
  for (long i = 0; i < steps; ++i) stepper.step(st);
  return st.v_d;
}

Field propagate_linear(const LinearizedOp& op, const Field& v, double horizon, double dt) {
  if (!(horizon >= dt)) throw ValidationError("propagate_linear: horizon must be >= dt");
  Stepper stepper(op, dt, Mode::linear);
  const long steps = std::lround(horizon / dt);
  const Field start = stepper.admissible(v) ? v : stepper.admit(v);
  return propagate_admitted(stepper, start, steps);
}

Field full_velocity(const Field& v_d, const LinearizedOp& op) {
  const Grid& g = op.grid();
  Field v = transform(v_d, Repr::physical);
  for (std::size_t c = 0; c < 2; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        cplx* col = v.column(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k) col[k] += op.profile(c, k);
      }
  return v;
}

Field initial_velocity(const SimConfig& cfg, const LinearizedOp& op) {
  const Grid& g = op.grid();
  if (!cfg.init.snapshot.empty()) {
    const Snapshot snap = read_snapshot(cfg.init.snapshot);
    const Grid& sg = snap.velocity.grid();
    if (sg.nx() != g.nx() || sg.ny() != g.ny() || sg.nz() != g.nz() || sg.lx() != g.lx() ||
        sg.ly() != g.ly() || sg.h() != g.h()) {
      throw ValidationError("init.snapshot: grid does not match the configuration");
    }
    Field v(op.grid_ptr(), Repr::physical);
    for (std::size_t c = 0; c < 2; ++c) v.comp(c) = snap.velocity.comp(c);
    return v;
  }
  Field zero(op.grid_ptr(), Repr::physical);
  Field v = cfg.init.amplitude > 0.0
                ? random_field(op.grid_ptr(), cfg.init.seed, cfg.init.amplitude, cfg.init.slope)
                : zero;
  return full_velocity(v, op);
}

SimResult simulate(const SimConfig& cfg, const PhysicalParams& params,
                   const SimObserver& observer) {
  params.validate();
  cfg.validate(params);
  const GridPtr grid = Grid::create(cfg.nx, cfg.ny, cfg.nz, params.lx, params.ly, params.h);
  const LinearizedOp op(params, grid);
  Stepper stepper(op, cfg.dt, cfg.mode);

  SimResult result;
  result.verdict = smallness_constant(params);
  result.steps = cfg.steps();

  Field v_d0 = initial_velocity(cfg, op);
  for (std::size_t c = 0; c < 2; ++c)
    for (int ix = 0; ix < grid->nx(); ++ix)
      for (int iy = 0; iy < grid->ny(); ++iy) {
        cplx* col = v_d0.column(c, ix, iy);
        for (int k = 0; k < grid->npts(); ++k) col[k] -= op.profile(c, k);
      }
  SimState state = stepper.initial_state(v_d0, true);
  result.initial_smoothing = true;

  auto emit = [&](const SimState& st) {
    DiagnosticsRecord r = record(st.v_d, st.t);
    if (observer.on_record) observer.on_record(r);
    result.records.push_back(r);
  };
  emit(state);
  for (long i = 1; i <= result.steps; ++i) {
    stepper.step(state);
    if (i % cfg.output_every == 0 || i == result.steps) emit(state);
    const bool snap = (cfg.snapshot_every > 0 && i % cfg.snapshot_every == 0) || i == result.steps;
    if (snap && observer.on_snapshot) observer.on_snapshot(full_velocity(state.v_d, op), state.t, i);
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace pe
