#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "pe/errors.hpp"
#include "pe/operator.hpp"
#include "pe/solver.hpp"

namespace pe {

namespace {

// Nodal values scaled by the square roots of the L2 quadrature weights, so the
// Euclidean inner product of flattened vectors is the L2 inner product.
Eigen::VectorXd sqrt_weights(const Grid& g) {
  const double cell = g.lx() * g.ly() / static_cast<double>(g.horizontal_size());
  Eigen::VectorXd s(g.size());
  for (std::size_t col = 0; col < g.horizontal_size(); ++col)
    for (int k = 0; k < g.npts(); ++k) s[col * g.npts() + k] = std::sqrt(cell * g.weights()[k]);
  return s;
}

// The AB2 state is the pair (v, lagged tendency); both halves are flattened so
// the propagator is an exact power of the one-step map.
Eigen::VectorXd flatten(const SimState& st, const Eigen::VectorXd& scale) {
  const Field* parts[2] = {&st.v_d, &st.prev_tendency};
  const std::size_t n = st.v_d.grid().size();
  Eigen::VectorXd out(4 * n);
  for (std::size_t h = 0; h < 2; ++h) {
    const Field p = transform(*parts[h], Repr::physical);
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < n; ++i) out[(2 * h + c) * n + i] = scale[i] * p.comp(c)[i].real();
  }
  return out;
}

SimState unflatten(const GridPtr& grid, const Eigen::VectorXd& x, const Eigen::VectorXd& scale) {
  const std::size_t n = grid->size();
  SimState st;
  Field* parts[2] = {&st.v_d, &st.prev_tendency};
  for (std::size_t h = 0; h < 2; ++h) {
    Field out(grid, Repr::physical);
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < n; ++i) out.comp(c)[i] = x[(2 * h + c) * n + i] / scale[i];
    *parts[h] = transform(out, Repr::spectral);
  }
  st.has_prev = true;
  return st;
}

struct Ritz {
  std::complex<double> value;
  double residual;
  Eigen::VectorXcd coords;  // in the Arnoldi basis
};

// Dominant Ritz pair of the leading (m x m) block of the Hessenberg matrix;
// `beta` is the subdiagonal entry h_{m+1,m}.
Ritz dominant_ritz(const Eigen::MatrixXd& hess, int m, double beta) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(hess.topLeftCorner(m, m), true);
  const auto& vals = es.eigenvalues();
  int best = 0;
  for (int i = 1; i < m; ++i)
    if (std::abs(vals[i]) > std::abs(vals[best])) best = i;
  Eigen::VectorXcd y = es.eigenvectors().col(best);
  y /= y.norm();
  const double mag = std::abs(vals[best]);
  const double res = mag > 0.0 ? beta * std::abs(y[m - 1]) / mag : beta;
  return {vals[best], res, y};
}

}  // namespace

SpectralBound estimate_spectral_bound(const LinearizedOp& op, SpectralBoundOptions opts) {
  if (opts.krylov_dim < 2) throw ValidationError("krylov_dim must be >= 2");
  if (!(opts.dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(opts.tol > 0.0)) throw ValidationError("tol must be > 0");
  const double horizon = opts.horizon > 0.0 ? opts.horizon : 1.0 / std::abs(op.params().f);
  if (!(horizon >= opts.dt)) throw ValidationError("horizon must be >= dt");

  Stepper stepper(op, opts.dt, Mode::linear);
  const long steps = std::lround(horizon / opts.dt);
  const double span = static_cast<double>(steps) * opts.dt;
  const int m = opts.krylov_dim;
  const Eigen::VectorXd scale = sqrt_weights(op.grid());

  constexpr int kFilterPasses = 3;
  auto one_step = [&](const Eigen::VectorXd& x) {
    SimState st = unflatten(op.grid_ptr(), x, scale);
    stepper.step(st);
    return flatten(st, scale);
  };
  // S^n ((I + S) / 2)^3 with S the one-step map. Crank-Nicolson sends the
  // stiffest vertical modes to amplification factors near -1; on a long horizon
  // they can outlast the physical modes. Each averaging factor suppresses them by
  // about 2 / (dt nu lambda) while leaving smooth modes almost untouched, and
  // being a polynomial in S it keeps the eigenvectors.
  auto filtered = [&](const Eigen::VectorXd& x) {
    SimState st = unflatten(op.grid_ptr(), x, scale);
    for (long i = 0; i < steps; ++i) stepper.step(st);
    Eigen::VectorXd a = flatten(st, scale);
    for (int pass = 0; pass < kFilterPasses; ++pass) a = 0.5 * (a + one_step(a));
    return a;
  };

  SimState start = stepper.initial_state(random_field(op.grid_ptr(), opts.seed, 1.0, 2.0));
  stepper.step(start);
  Eigen::VectorXd q = flatten(start, scale);
  const Eigen::Index n = q.size();
  const double q_norm = q.norm();
  if (q_norm == 0.0) throw SolverError("degenerate Krylov start vector", 0);

  Eigen::MatrixXd basis(n, m + 1);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(m + 1, m);
  basis.col(0) = q / q_norm;

  SpectralBound out;
  out.horizon = span;
  out.krylov_dim = m;
  Ritz ritz{};
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd w = filtered(basis.col(j));
    const double w_norm = w.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= j; ++i) {
        const double c = basis.col(i).dot(w);
        hess(i, j) += c;
        w -= c * basis.col(i);
      }
    const double beta = w.norm();
    hess(j + 1, j) = beta;
    out.iterations = j + 1;
    ritz = dominant_ritz(hess, j + 1, beta);
    const bool breakdown = beta <= 1e-14 * std::max(w_norm, 1e-300);
    if (breakdown) ritz.residual = 0.0;
    if (ritz.residual <= opts.tol || breakdown) break;
    basis.col(j + 1) = w / beta;
  }

  // One-step eigenvalue from the Rayleigh quotient of the Ritz vector; the
  // horizon propagator's eigenvalue is its steps-th power.
  const int k = out.iterations;
  const Eigen::VectorXd re = basis.leftCols(k) * ritz.coords.real();
  const Eigen::VectorXd im = basis.leftCols(k) * ritz.coords.imag();
  const Eigen::VectorXd s_re = one_step(re), s_im = one_step(im);
  const std::complex<double> rayleigh(re.dot(s_re) + im.dot(s_im), re.dot(s_im) - im.dot(s_re));
  const std::complex<double> mu = rayleigh / (re.squaredNorm() + im.squaredNorm());

  out.residual = ritz.residual;
  out.converged = ritz.residual <= opts.tol;
  const double mag = std::abs(mu);
  out.omega0 = mag > 0.0 ? std::log(mag) / opts.dt : -std::numeric_limits<double>::infinity();
  out.ritz = std::pow(mu, static_cast<double>(steps));
  out.complex_pair = std::abs(ritz.value.imag()) > 1e-10 * std::abs(ritz.value);
  out.unstable = out.omega0 >= 0.0;
  return out;
}

}  // namespace pe
