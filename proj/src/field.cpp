#include "pe/field.hpp"

#include <cmath>
#include <random>

namespace pe {

Field random_field(const GridPtr& grid, std::uint64_t seed, double amplitude, double slope) {
  const Grid& g = *grid;
  Field f(grid, Repr::spectral);
  if (amplitude == 0.0) return transform(f, Repr::physical);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kDegree = 4;
  const double h = g.h();

  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (!g.retained(ix, iy)) continue;
      const double mx = g.wave_x(ix);
      const double my = g.wave_y(iy);
      const double envelope = std::pow(1.0 + std::sqrt(mx * mx + my * my), -slope);
      for (std::size_t c = 0; c < 2; ++c) {
        std::array<cplx, kDegree> coef;
        for (auto& a : coef) {
          const double re = normal(rng);
          const double im = normal(rng);
          a = envelope * cplx(re, im);
        }
        // p'(0): s = 1 at the surface
        cplx slope_top{};
        for (int m = 0; m < kDegree; ++m) slope_top += coef[m] * static_cast<double>(m + 1) / h;
        cplx* col = f.column(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k) {
          const double s = (g.z(k) + h) / h;
          cplx p{};
          double sp = s;
          for (int m = 0; m < kDegree; ++m, sp *= s) p += coef[m] * sp;
          const double zh = g.z(k) + h;
          col[k] = p - slope_top * zh * zh / (2.0 * h);
        }
      }
    }

  // Keep the real part: the result is a real field with the same boundary
  // behaviour as every sampled column.
  f.to(Repr::physical);
  double vmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    vmax = std::max(vmax, std::hypot(f.comp(0)[i].real(), f.comp(1)[i].real()));
  if (vmax > 0.0) f *= amplitude / vmax;
  return f;
}

ScalarField horizontal_divergence(const Field& v) {
  const Grid& g = v.grid();
  const Field s = transform(v, Repr::spectral);
  ScalarField out(v.grid_ptr(), Repr::spectral);
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const cplx ikx(0.0, 2 * ix == g.nx() ? 0.0 : g.kx(ix));
      const cplx iky(0.0, 2 * iy == g.ny() ? 0.0 : g.ky(iy));
      const cplx* a = s.column(0, ix, iy);
      const cplx* b = s.column(1, ix, iy);
      cplx* o = out.column(0, ix, iy);
      for (int k = 0; k < g.npts(); ++k) o[k] = ikx * a[k] + iky * b[k];
    }
  return out;
}

}  // namespace pe
