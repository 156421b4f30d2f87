#include "pe/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

#include "pe/errors.hpp"
#include "pe/hydrostatics.hpp"
#include "pe/snapshot.hpp"

#ifndef PE_VERSION
#define PE_VERSION "unknown"
#endif

namespace pe {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Exclusive ownership of an output directory for the lifetime of a run.
class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw std::runtime_error("output directory is locked by another run: " + path_.string());
    std::fclose(f);
  }
  ~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
};

void write_text_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

}  // namespace

const char* code_version() { return PE_VERSION; }

RunConfig apply_overrides(RunConfig cfg, const Overrides& o) {
  if (o.horizon) cfg.spectrum.horizon = *o.horizon;
  if (o.krylov) cfg.spectrum.krylov = *o.krylov;
  if (o.tol) cfg.spectrum.tol = *o.tol;
  if (o.seed) cfg.sim.init.seed = *o.seed;
  validate(cfg);
  return cfg;
}

std::string format_series_row(const DiagnosticsRecord& r) {
  std::string row;
  for (double v : {r.t, r.l2, r.h1, r.h2, r.h3, r.l4_baroclinic, r.energy, r.jensen_slack,
                   r.poincare_slack, r.barotropic_h1, r.bilinear_ratio_k0}) {
    if (!row.empty()) row += ',';
    row += std::isnan(v) ? std::string("nan") : g17(v);
  }
  return row;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const EkmanSolution sol = ekman_coefficients(cfg.physics);
  const Smallness s = smallness_constant(cfg.physics);
  out << "d = " << g17(sol.d) << "\n"
      << "k1 = " << g17(sol.k1) << "\n"
      << "k2 = " << g17(sol.k2) << "\n"
      << "k3 = " << g17(sol.k3) << "\n"
      << "k4 = " << g17(sol.k4) << "\n"
      << "sup_derivative_bound = " << g17(sup_derivative_bound(sol)) << "\n"
      << "C_E = " << g17(s.c_e) << "\n"
      << (s.stable ? "PASS (C_E < 1)" : "FAIL (C_E >= 1)") << "\n";
  return s.stable ? kExitOk : kExitValidation;
}

int cmd_ekman(const RunConfig& cfg, int samples, const std::string& path, std::ostream& out) {
  if (samples < 2) throw ValidationError("--samples must be >= 2");
  const EkmanSolution sol = ekman_coefficients(cfg.physics);
  const double h = cfg.physics.h;
  std::string text = "z,v1,v2,dv1dz,dv2dz\n";
  for (int i = 0; i < samples; ++i) {
    // exact endpoints
    const double z = i == samples - 1 ? 0.0 : -h + h * static_cast<double>(i) / (samples - 1);
    const Vec2 v = sol.profile(z);
    const Vec2 dv = sol.derivative(z);
    text += g17(z) + "," + g17(v[0]) + "," + g17(v[1]) + "," + g17(dv[0]) + "," + g17(dv[1]) + "\n";
  }
  if (path.empty() || path == "-") {
    out << text;
  } else {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path);
    out << "wrote " << samples << " rows to " << path << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, std::ostream& out) {
  if (out_dir.empty()) throw ValidationError("--out-dir is required");
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  DirLock lock(dir);

  const fs::path manifest = dir / "manifest.txt";
  std::error_code ec;
  fs::remove(manifest, ec);
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".pesn") fs::remove(entry.path());

  const Smallness verdict = smallness_constant(cfg.physics);
  const std::string started = utc_now();

  std::ofstream series(dir / "series.csv", std::ios::trunc);
  if (!series) throw std::runtime_error("cannot write " + (dir / "series.csv").string());
  series << kSeriesHeader << "\n" << std::flush;

  std::vector<std::string> snapshots;
  SimObserver obs;
  obs.on_record = [&](const DiagnosticsRecord& r) {
    series << format_series_row(r) << "\n" << std::flush;
  };
  obs.on_snapshot = [&](const Field& v, double t, long step) {
    char name[48];
    std::snprintf(name, sizeof name, "snapshot_%08ld.pesn", step);
    write_snapshot(v, t, (dir / name).string());
    snapshots.emplace_back(name);
  };

  std::string status = "ok";
  std::string failure;
  long failed_step = -1;
  long steps = cfg.sim.steps();
  std::size_t records = 0;
  bool smoothing = true;
  try {
    const SimResult res = simulate(cfg.sim, cfg.physics, obs);
    records = res.records.size();
    smoothing = res.initial_smoothing;
  } catch (const SolverError& e) {
    status = "failed";
    failure = e.what();
    failed_step = e.step();
  }
  series.close();

  std::string text;
  text += "format = pe-manifest 1\n";
  text += std::string("code_version = ") + code_version() + "\n";
  for (const auto& [k, v] : config_entries(cfg)) text += "config." + k + " = " + v + "\n";
  text += "seed = " + std::to_string(cfg.sim.init.seed) + "\n";
  text += "c_e = " + g17(verdict.c_e) + "\n";
  text += "c_e_below_one = " + std::string(verdict.stable ? "true" : "false") + "\n";
  text += "omega0 = not computed\n";
  text += "initial_smoothing = " + std::string(smoothing ? "implicit half step" : "none") + "\n";
  text += "steps = " + std::to_string(steps) + "\n";
  text += "records = " + std::to_string(records) + "\n";
  for (std::size_t i = 0; i < snapshots.size(); ++i)
    text += "snapshot." + std::to_string(i) + " = " + snapshots[i] + "\n";
  text += "status = " + status + "\n";
  if (failed_step >= 0) {
    text += "failed_step = " + std::to_string(failed_step) + "\n";
    text += "error = " + failure + "\n";
  }
  text += "started_at = " + started + "\n";
  text += "finished_at = " + utc_now() + "\n";
  write_text_atomically(manifest, text);

  out << "C_E = " << g17(verdict.c_e) << (verdict.stable ? " (< 1)" : " (>= 1)") << "\n";
  if (failed_step >= 0) {
    out << "simulation failed: " << failure << "\n";
    return kExitRuntime;
  }
  out << "wrote " << records << " records to " << (dir / "series.csv").string() << "\n";
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const GridPtr grid = Grid::create(cfg.sim.nx, cfg.sim.ny, cfg.sim.nz, cfg.physics.lx,
                                    cfg.physics.ly, cfg.physics.h);
  const LinearizedOp op(cfg.physics, grid);
  SpectralBoundOptions opts;
  opts.horizon = cfg.spectrum.horizon;
  opts.krylov_dim = cfg.spectrum.krylov;
  opts.tol = cfg.spectrum.tol;
  opts.dt = cfg.sim.dt;
  opts.seed = cfg.sim.init.seed;
  const SpectralBound sb = estimate_spectral_bound(op, opts);
  out << "omega0 = " << g17(sb.omega0) << "\n"
      << "residual = " << g17(sb.residual) << "\n"
      << "horizon = " << g17(sb.horizon) << "\n"
      << "krylov_dim = " << sb.krylov_dim << "\n"
      << "iterations = " << sb.iterations << "\n"
      << "ritz = " << g17(sb.ritz.real()) << " " << g17(sb.ritz.imag()) << "\n"
      << "complex_pair = " << (sb.complex_pair ? "true" : "false") << "\n";
  if (sb.unstable) out << "note: unstable regime detected (omega0 >= 0)\n";
  if (!sb.converged) {
    out << "status = not converged\n";
    return kExitNotConverged;
  }
  out << "status = converged\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const PhysicalParams& p = cfg.physics;
  const GridPtr grid = Grid::create(cfg.sim.nx, cfg.sim.ny, cfg.sim.nz, p.lx, p.ly, p.h);
  const Grid& g = *grid;
  const LinearizedOp op(p, grid);
  Stepper stepper(op, cfg.sim.dt, Mode::nonlinear);
  std::vector<CheckLine> lines;
  auto check = [&](const std::string& name, double value, double bound) {
    lines.push_back({name, std::isfinite(value) && value <= bound,
                     "value " + g17(value) + " bound " + g17(bound)});
  };

  {
    const EkmanSolution& sol = op.ekman();
    const Vec2 top = sol.derivative(0.0);
    const Vec2 bottom = sol.profile(-p.h);
    const double scale = 1.0 + std::abs(p.tau[0]) + std::abs(p.tau[1]) + std::abs(p.v_g[0]) +
                         std::abs(p.v_g[1]);
    check("ekman boundary conditions",
          std::max({std::abs(top[0] - p.tau[0]), std::abs(top[1] - p.tau[1]),
                    std::abs(bottom[0] - p.v_g[0]), std::abs(bottom[1] - p.v_g[1])}),
          1e-10 * scale);

    const int n = g.npts();
    Eigen::VectorXd v1(n), v2(n);
    for (int k = 0; k < n; ++k) {
      v1[k] = op.profile(0, k);
      v2[k] = op.profile(1, k);
    }
    const Eigen::VectorXd r1 = p.nu_z * (g.dz2() * v1) + p.f * v2;
    const Eigen::VectorXd r2 = p.nu_z * (g.dz2() * v2) - p.f * v1;
    const double vmax = std::max(v1.cwiseAbs().maxCoeff(), v2.cwiseAbs().maxCoeff());
    check("ekman equilibrium residual", std::max(r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff()),
          1e-8 * (1.0 + vmax));
  }

  const Field raw = random_field(grid, cfg.sim.init.seed + 1, 1.0, 2.0);
  {
    const double phys = l2_squared(raw);
    const double spec = l2_squared(transform(raw, Repr::spectral));
    check("parseval", std::abs(phys - spec) / phys, 1e-11);
  }
  const Field v = stepper.admit(raw);
  const double vn = std::sqrt(l2_squared(v));
  {
    const Field pv = project(v);
    check("projection idempotent", std::sqrt(l2_squared(project(pv) - pv)) / vn, 1e-12);
    check("barotropic divergence", barotropic_divergence(v), 1e-9 * (1.0 + vn));
    check("boundary residual", boundary_residual(v), 1e-8);
  }
  {
    const DiagnosticsRecord r = record(v, 0.0);
    check("jensen slack", -r.jensen_slack, 1e-10);
    check("poincare slack", -r.poincare_slack, 1e-10);
    const BarotropicField bar = vertical_average(v);
    double bar_sq = 0.0;
    for (std::size_t c = 0; c < 2; ++c)
      for (const cplx& z : bar.comp(c)) bar_sq += std::norm(z);
    bar_sq *= g.lx() * g.ly();
    const double split = bar_sq * g.h() + l2_squared(baroclinic_part(v));
    check("barotropic/baroclinic orthogonality", std::abs(split - vn * vn) / (vn * vn), 1e-10);
  }
  {
    Field rot(grid, Repr::spectral);
    const Field s = transform(v, Repr::spectral);
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy)
        for (int k = 0; k < g.npts(); ++k) {
          rot(0, ix, iy, k) = -p.f * s(1, ix, iy, k);
          rot(1, ix, iy, k) = p.f * s(0, ix, iy, k);
        }
    check("rotation skewness", std::abs(inner_product(project(rot), v)), 1e-10 * std::abs(p.f) * vn * vn);
  }
  {
    SimState st = stepper.initial_state(Field(grid, Repr::physical), false);
    stepper.step(st);
    check("fixed point persists", std::sqrt(l2_squared(st.v_d)), 1e-13);
  }
  {
    const Field a = stepper.admit(random_field(grid, cfg.sim.init.seed + 2, 1.0, 2.0));
    const Field b = stepper.admit(random_field(grid, cfg.sim.init.seed + 3, 1.0, 2.0));
    Stepper lin(op, cfg.sim.dt, Mode::linear);
    const long n = 5;
    const Field lhs = propagate_admitted(lin, 2.0 * a + (-3.0) * b, n);
    const Field rhs = 2.0 * propagate_admitted(lin, a, n) + (-3.0) * propagate_admitted(lin, b, n);
    check("linear propagator linearity", std::sqrt(l2_squared(lhs - rhs) / l2_squared(rhs)), 1e-11);
  }

  bool all = true;
  for (const auto& l : lines) {
    out << (l.pass ? "PASS " : "FAIL ") << l.name << " (" << l.detail << ")\n";
    all = all && l.pass;
  }
  return all ? kExitOk : kExitRuntime;
}

}  // namespace pe
