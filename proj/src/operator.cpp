#include "pe/operator.hpp"

#include <cmath>

#include "pe/hydrostatics.hpp"

namespace pe {

LinearizedOp::LinearizedOp(const PhysicalParams& params, GridPtr grid)
    : params_(params), ekman_(ekman_coefficients(params)), grid_(std::move(grid)) {
  for (std::size_t c = 0; c < 2; ++c) {
    profile_[c].resize(grid_->npts());
    shear_[c].resize(grid_->npts());
  }
  for (int k = 0; k < grid_->npts(); ++k) {
    const Vec2 v = ekman_.profile(grid_->z(k));
    const Vec2 dv = ekman_.derivative(grid_->z(k));
    for (std::size_t c = 0; c < 2; ++c) {
      profile_[c][k] = v[c];
      shear_[c][k] = dv[c];
    }
  }
}

Field LinearizedOp::diffusion(const Field& v) const {
  const Grid& g = *grid_;
  const Field s = transform(v, Repr::spectral);
  Field out(grid_, Repr::spectral);
  for (std::size_t c = 0; c < 2; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        cplx* o = out.column(c, ix, iy);
        const cplx* in = s.column(c, ix, iy);
        apply_vertical(g.dz2(), in, o);
        const double kk = g.k2(ix, iy);
        for (int k = 0; k < g.npts(); ++k) o[k] = params_.nu_z * o[k] - params_.nu_h * kk * in[k];
      }
  return out;
}

void LinearizedOp::add_coupling(int ix, int iy, const cplx* v1, const cplx* v2, cplx* out1,
                                cplx* out2, std::vector<cplx>& scratch) const {
  const Grid& g = *grid_;
  const int n = g.npts();
  const double f = params_.f;
  const bool nyq_x = 2 * ix == g.nx();
  const bool nyq_y = 2 * iy == g.ny();
  const cplx ikx(0.0, nyq_x ? 0.0 : g.kx(ix));
  const cplx iky(0.0, nyq_y ? 0.0 : g.ky(iy));
  for (int k = 0; k < n; ++k) {
    out1[k] += f * v2[k];
    out2[k] -= f * v1[k];
  }
  if (ikx == cplx{} && iky == cplx{}) return;
  // w = -int div_H v
  scratch.resize(2 * static_cast<std::size_t>(n));
  cplx* div = scratch.data();
  cplx* w = scratch.data() + n;
  for (int k = 0; k < n; ++k) div[k] = ikx * v1[k] + iky * v2[k];
  apply_vertical(g.antiderivative(), div, w);
  for (int k = 0; k < n; ++k) {
    w[k] = -w[k];
    const cplx adv = ikx * profile_[0][k] + iky * profile_[1][k];
    out1[k] -= adv * v1[k] + w[k] * shear_[0][k];
    out2[k] -= adv * v2[k] + w[k] * shear_[1][k];
  }
}

Field LinearizedOp::coupling(const Field& v) const {
  const Grid& g = *grid_;
  const Field s = transform(v, Repr::spectral);
  Field out(grid_, Repr::spectral);
  std::vector<cplx> scratch;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy)
      add_coupling(ix, iy, s.column(0, ix, iy), s.column(1, ix, iy), out.column(0, ix, iy),
                   out.column(1, ix, iy), scratch);
  return out;
}

Field advection(const Field& v, const Field& vp) {
  const Grid& g = v.grid();
  const Field vs = transform(v, Repr::spectral);
  const Field ps = transform(vp, Repr::spectral);
  const Field u = transform(vs, Repr::physical);
  const Field dx = transform(diff(ps, Axis::x), Repr::physical);
  const Field dy = transform(diff(ps, Axis::y), Repr::physical);
  const Field dz = transform(diff(ps, Axis::z), Repr::physical);
  const ScalarField w = transform(reconstruct_w(vs), Repr::physical);
  Field out(v.grid_ptr(), Repr::physical);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      out.comp(c)[i] = u.comp(0)[i].real() * dx.comp(c)[i].real() +
                       u.comp(1)[i].real() * dy.comp(c)[i].real() +
                       w.comp(0)[i].real() * dz.comp(c)[i].real();
    }
  out.to(Repr::spectral);
  return dealias(std::move(out));
}

Field apply_F(const Field& v, const Field& vp) { return project(advection(v, vp)); }

double boundary_residual(const Field& v) {
  const Grid& g = v.grid();
  const Field p = transform(v, Repr::physical);
  const Field dz = diff(p, Axis::z);
  double worst = 0.0;
  for (std::size_t c = 0; c < 2; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        worst = std::max(worst, std::abs(dz(c, ix, iy, 0)));
        worst = std::max(worst, std::abs(p(c, ix, iy, g.nz())));
      }
  return worst / (1.0 + std::sqrt(l2_squared(p)));
}

Field apply_A(const LinearizedOp& op, const Field& v, bool* boundary_warning) {
  if (boundary_warning) *boundary_warning = boundary_residual(v) > 1e-8;
  Field t = op.diffusion(v);
  t += op.coupling(v);
  return project(t);
}

std::optional<double> bilinear_ratio(const Field& v, int k) {
  if (k < 0 || k > 2) throw std::invalid_argument("bilinear_ratio supports k in {0, 1, 2}");
  const double base = sobolev_norm(v, k);
  if (base == 0.0) return std::nullopt;
  const Field fvv = apply_F(v, v);
  if (k == 0) {
    const double h32 = fractional_h32_norm(v);
    return sobolev_norm(fvv, 0) / (h32 * h32);
  }
  const double denom =
      std::sqrt(sobolev_norm(v, k + 2)) * sobolev_norm(v, k + 1) * std::sqrt(base);
  return sobolev_norm(fvv, k) / denom;
}

}  // namespace pe
