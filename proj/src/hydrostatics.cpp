#include "pe/hydrostatics.hpp"

#include <cmath>

#include "pe/errors.hpp"

namespace pe {

namespace {

bool is_nyquist(const Grid& g, int ix, int iy) { return 2 * ix == g.nx() || 2 * iy == g.ny(); }

// i k for a real field (Nyquist derivatives are zero).
std::array<cplx, 2> ik(const Grid& g, int ix, int iy) {
  return {cplx(0.0, 2 * ix == g.nx() ? 0.0 : g.kx(ix)),
          cplx(0.0, 2 * iy == g.ny() ? 0.0 : g.ky(iy))};
}

double surface_l2(const Grid& g, const std::vector<cplx>& spec) {
  double s = 0.0;
  for (const auto& c : spec) s += std::norm(c);
  return std::sqrt(s * g.lx() * g.ly());
}

}  // namespace

BarotropicField vertical_average(const Field& v) {
  const Field s = transform(v, Repr::spectral);
  BarotropicField avg = vertical_integral(s);
  const double inv_h = 1.0 / v.grid().h();
  for (std::size_t c = 0; c < 2; ++c)
    for (auto& x : avg.comp(c)) x *= inv_h;
  return avg;
}

Field baroclinic_part(const Field& v) {
  const Grid& g = v.grid();
  Field s = transform(v, Repr::spectral);
  const BarotropicField avg = vertical_average(s);
  for (std::size_t c = 0; c < 2; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        cplx* col = s.column(c, ix, iy);
        const cplx m = avg(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k) col[k] -= m;
      }
  s.to(v.repr());
  return s;
}

ScalarField reconstruct_w(const Field& v) {
  ScalarField w = vertical_antiderivative(horizontal_divergence(v));
  w *= -1.0;
  return w;
}

Field project(const Field& v) {
  const Grid& g = v.grid();
  Field s = transform(v, Repr::spectral);
  const BarotropicField avg = vertical_average(s);
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (ix == 0 && iy == 0) continue;
      const auto k = ik(g, ix, iy);
      // k = 0 along an axis at the Nyquist slot: use the real wavevector
      const double kx = k[0].imag();
      const double ky = k[1].imag();
      const double kk = kx * kx + ky * ky;
      if (kk == 0.0) continue;
      const cplx kdotv = kx * avg(0, ix, iy) + ky * avg(1, ix, iy);
      const cplx c0 = kx * kdotv / kk;
      const cplx c1 = ky * kdotv / kk;
      cplx* a = s.column(0, ix, iy);
      cplx* b = s.column(1, ix, iy);
      for (int z = 0; z < g.npts(); ++z) {
        a[z] -= c0;
        b[z] -= c1;
      }
    }
  s.to(v.repr());
  return s;
}

Field solenoidal_random_field(const GridPtr& grid, std::uint64_t seed, double amplitude,
                              double slope) {
  const Grid& g = *grid;
  Field s = transform(random_field(grid, seed, amplitude, slope), Repr::spectral);
  if (amplitude == 0.0) return transform(s, Repr::physical);
  const BarotropicField avg = vertical_average(s);
  // phi(-h) = 0, phi'(0) = 0, mean 2/3
  std::vector<double> shape(g.npts());
  for (int z = 0; z < g.npts(); ++z) {
    const double r = g.z(z) / g.h();
    shape[z] = 1.5 * (1.0 - r * r);
  }
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const auto k = ik(g, ix, iy);
      const double kx = k[0].imag();
      const double ky = k[1].imag();
      const double kk = kx * kx + ky * ky;
      if (kk == 0.0) continue;
      const cplx kdotv = kx * avg(0, ix, iy) + ky * avg(1, ix, iy);
      cplx* a = s.column(0, ix, iy);
      cplx* b = s.column(1, ix, iy);
      for (int z = 0; z < g.npts(); ++z) {
        a[z] -= kx * kdotv / kk * shape[z];
        b[z] -= ky * kdotv / kk * shape[z];
      }
    }
  s.to(Repr::physical);
  const double peak = lp_norm(s, kInfinity);
  if (peak > 0.0) s *= amplitude / peak;
  return s;
}

double barotropic_divergence(const Field& v) {
  const Grid& g = v.grid();
  const BarotropicField avg = vertical_average(v);
  std::vector<cplx> div(g.horizontal_size());
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const auto k = ik(g, ix, iy);
      div[static_cast<std::size_t>(ix) * g.ny() + iy] =
          k[0] * avg(0, ix, iy) + k[1] * avg(1, ix, iy);
    }
  return surface_l2(g, div);
}

double barotropic_gradient_norm(const Field& v) {
  const Grid& g = v.grid();
  const BarotropicField avg = vertical_average(v);
  double s = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const auto k = ik(g, ix, iy);
      const double kk = std::norm(k[0]) + std::norm(k[1]);
      s += kk * (std::norm(avg(0, ix, iy)) + std::norm(avg(1, ix, iy)));
    }
  return std::sqrt(s * g.lx() * g.ly());
}

double PressureSolution::full(int ix, int iy, double z) const {
  SurfaceField phys = surface;
  phys.to(Repr::physical);
  return phys(0, ix, iy).real() - rho0 * g * z;
}

PressureSolution recover_pressure(const Field& v, const PhysicalParams& params) {
  const Grid& g = v.grid();
  const double norm = std::sqrt(l2_squared(v));
  if (barotropic_divergence(v) > 1e-8 * (1.0 + norm)) {
    throw ValidationError("recover_pressure: velocity is not in the projected space");
  }
  const Field s = transform(v, Repr::spectral);
  const Field dz = diff(s, Axis::z);

  // Physical-space products for the depth-integrated advection terms.
  const Field vp = transform(s, Repr::physical);
  const Field dxv = diff(vp, Axis::x);
  const Field dyv = diff(vp, Axis::y);
  const ScalarField div = transform(horizontal_divergence(s), Repr::physical);
  Field adv(v.grid_ptr(), Repr::physical);   // v . grad_H v
  Field vdiv(v.grid_ptr(), Repr::physical);  // v div_H v
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v1 = vp.comp(0)[i].real();
      const double v2 = vp.comp(1)[i].real();
      adv.comp(c)[i] = v1 * dxv.comp(c)[i].real() + v2 * dyv.comp(c)[i].real();
      vdiv.comp(c)[i] = vp.comp(c)[i].real() * div.comp(0)[i].real();
    }
  const Field adv_s = dealias(transform(adv, Repr::spectral));
  const Field vdiv_s = dealias(transform(vdiv, Repr::spectral));
  const BarotropicField adv_int = vertical_integral(adv_s);
  const BarotropicField vdiv_int = vertical_integral(vdiv_s);
  const BarotropicField avg = vertical_average(s);

  const double h = g.h();
  const int bottom = g.nz();
  PressureSolution out{SurfaceField(v.grid_ptr(), Repr::spectral), params.rho0, params.g, 0.0};
  std::vector<cplx> mismatch(g.horizontal_size());
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (is_nyquist(g, ix, iy)) continue;
      const auto k = ik(g, ix, iy);
      const double kk = -(k[0] * k[0] + k[1] * k[1]).real();
      if (kk == 0.0) continue;
      auto divh = [&](cplx a, cplx b) { return k[0] * a + k[1] * b; };
      const cplx bottom_drag =
          divh(dz(0, ix, iy, bottom), dz(1, ix, iy, bottom)) * (params.nu_z / h);
      const cplx surface_shear = divh(dz(0, ix, iy, 0), dz(1, ix, iy, 0)) * (params.nu_z / h);
      const cplx flux_minus =
          divh(adv_int(0, ix, iy) - vdiv_int(0, ix, iy), adv_int(1, ix, iy) - vdiv_int(1, ix, iy)) /
          h;
      const cplx flux_plus =
          divh(adv_int(0, ix, iy) + vdiv_int(0, ix, iy), adv_int(1, ix, iy) + vdiv_int(1, ix, iy)) /
          h;
      // div_H of f vbar^perp = f (-dx vbar2 + dy vbar1)
      const cplx coriolis = params.f * divh(-avg(1, ix, iy), avg(0, ix, iy));

      const cplx rhs = -bottom_drag + flux_minus;  // Lap_H pi_s / rho0
      out.surface(0, ix, iy) = params.rho0 * rhs / (-kk);
      const cplx balance = surface_shear - bottom_drag - flux_plus - coriolis;
      mismatch[static_cast<std::size_t>(ix) * g.ny() + iy] = rhs - balance;
    }
  out.momentum_residual = surface_l2(g, mismatch);
  return out;
}

}  // namespace pe
