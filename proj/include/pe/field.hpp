#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pe/grid.hpp"
#include "pe/model.hpp"

namespace pe {

enum class Repr { physical, spectral };
enum class Axis { x, y, z };

/// NC-component field sampled on every grid point (or, in spectral repr,
/// every horizontal mode times every Lobatto point).
///
/// Physical-repr values are stored as complex numbers with zero imaginary
/// part; spectral data of a real field is Hermitian symmetric.
template <std::size_t NC>
class BasicField {
 public:
  static constexpr std::size_t kComponents = NC;

  BasicField() = default;
  explicit BasicField(GridPtr grid, Repr repr = Repr::physical)
      : grid_(std::move(grid)), repr_(repr) {
    for (auto& c : comp_) c.assign(grid_->size(), cplx{});
  }

  const GridPtr& grid_ptr() const { return grid_; }
  const Grid& grid() const { return *grid_; }
  Repr repr() const { return repr_; }
  bool empty() const { return !grid_; }

  std::vector<cplx>& comp(std::size_t c) { return comp_[c]; }
  const std::vector<cplx>& comp(std::size_t c) const { return comp_[c]; }

  cplx* column(std::size_t c, int ix, int iy) { return comp_[c].data() + grid_->column(ix, iy); }
  const cplx* column(std::size_t c, int ix, int iy) const {
    return comp_[c].data() + grid_->column(ix, iy);
  }

  cplx& operator()(std::size_t c, int ix, int iy, int iz) {
    return comp_[c][grid_->index(ix, iy, iz)];
  }
  const cplx& operator()(std::size_t c, int ix, int iy, int iz) const {
    return comp_[c][grid_->index(ix, iy, iz)];
  }

  /// Relabels the data without transforming it. Only for code that has just
  /// filled the arrays in the given representation.
  void assume_repr(Repr r) { repr_ = r; }

  void to(Repr target) {
    if (target == repr_) return;
    for (auto& c : comp_) {
      if (target == Repr::spectral) {
        grid_->forward(c.data());
      } else {
        grid_->backward(c.data());
        for (auto& v : c) v = cplx(v.real(), 0.0);
      }
    }
    repr_ = target;
  }

  BasicField& operator+=(const BasicField& o) {
    check_compatible(o);
    for (std::size_t c = 0; c < NC; ++c)
      for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] += o.comp_[c][i];
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    check_compatible(o);
    for (std::size_t c = 0; c < NC; ++c)
      for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] -= o.comp_[c][i];
    return *this;
  }
  BasicField& operator*=(double s) {
    for (auto& c : comp_)
      for (auto& v : c) v *= s;
    return *this;
  }
  /// this += s * o
  BasicField& axpy(double s, const BasicField& o) {
    check_compatible(o);
    for (std::size_t c = 0; c < NC; ++c)
      for (std::size_t i = 0; i < comp_[c].size(); ++i) comp_[c][i] += s * o.comp_[c][i];
    return *this;
  }

  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(double s, BasicField a) { return a *= s; }

 private:
  void check_compatible(const BasicField& o) const {
    if (grid_ != o.grid_ || repr_ != o.repr_) {
      throw std::invalid_argument("field arithmetic on mismatched grid or representation");
    }
  }

  GridPtr grid_;
  std::array<std::vector<cplx>, NC> comp_;
  Repr repr_ = Repr::physical;
};

using Field = BasicField<2>;
using ScalarField = BasicField<1>;

/// NC-component field over the horizontal torus only (one z level).
template <std::size_t NC>
class HorizontalField {
 public:
  HorizontalField() = default;
  explicit HorizontalField(GridPtr grid, Repr repr = Repr::spectral)
      : grid_(std::move(grid)), repr_(repr) {
    for (auto& c : comp_) c.assign(grid_->horizontal_size(), cplx{});
  }

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Repr repr() const { return repr_; }

  std::vector<cplx>& comp(std::size_t c) { return comp_[c]; }
  const std::vector<cplx>& comp(std::size_t c) const { return comp_[c]; }
  cplx& operator()(std::size_t c, int ix, int iy) {
    return comp_[c][static_cast<std::size_t>(ix) * grid_->ny() + iy];
  }
  const cplx& operator()(std::size_t c, int ix, int iy) const {
    return comp_[c][static_cast<std::size_t>(ix) * grid_->ny() + iy];
  }

  void to(Repr target) {
    if (target == repr_) return;
    for (auto& c : comp_) {
      if (target == Repr::spectral) {
        grid_->forward_2d(c.data());
      } else {
        grid_->backward_2d(c.data());
        for (auto& v : c) v = cplx(v.real(), 0.0);
      }
    }
    repr_ = target;
  }

 private:
  GridPtr grid_;
  std::array<std::vector<cplx>, NC> comp_;
  Repr repr_ = Repr::spectral;
};

using BarotropicField = HorizontalField<2>;
using SurfaceField = HorizontalField<1>;

// ---------------------------------------------------------------------------
// Vertical column helpers: a real (npts x npts) matrix acting on a contiguous
// complex column.

inline void apply_vertical(const Eigen::MatrixXd& m, const cplx* in, cplx* out) {
  const auto n = m.rows();
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;
  Eigen::Map<const RowMat> src(reinterpret_cast<const double*>(in), n, 2);
  Eigen::Map<RowMat> dst(reinterpret_cast<double*>(out), n, 2);
  dst.noalias() = m * src;
}

inline cplx column_integral(const Grid& g, const cplx* col) {
  cplx s{};
  const auto& w = g.weights();
  for (int k = 0; k < g.npts(); ++k) s += w[k] * col[k];
  return s;
}

inline double column_energy(const Grid& g, const cplx* col) {
  double s = 0.0;
  const auto& w = g.weights();
  for (int k = 0; k < g.npts(); ++k) s += w[k] * std::norm(col[k]);
  return s;
}

// ---------------------------------------------------------------------------
// Operations

template <std::size_t NC>
BasicField<NC> transform(BasicField<NC> f, Repr target) {
  f.to(target);
  return f;
}

/// Spectral derivative along x or y, Chebyshev collocation derivative along z.
/// Returned in the representation of the input.
template <std::size_t NC>
BasicField<NC> diff(const BasicField<NC>& f, Axis axis) {
  const Grid& g = f.grid();
  if (axis == Axis::z) {
    BasicField<NC> out(f.grid_ptr(), f.repr());
    for (std::size_t c = 0; c < NC; ++c)
      for (int ix = 0; ix < g.nx(); ++ix)
        for (int iy = 0; iy < g.ny(); ++iy)
          apply_vertical(g.dz(), f.column(c, ix, iy), out.column(c, ix, iy));
    return out;
  }
  BasicField<NC> s = transform(f, Repr::spectral);
  for (std::size_t c = 0; c < NC; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        // the Nyquist derivative of a real field is zero
        const bool nyquist = axis == Axis::x ? 2 * ix == g.nx() : 2 * iy == g.ny();
        const cplx ik = nyquist ? cplx{} : cplx(0.0, axis == Axis::x ? g.kx(ix) : g.ky(iy));
        cplx* col = s.column(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k) col[k] *= ik;
      }
  s.to(f.repr());
  return s;
}

/// Antiderivative in z vanishing at z = -h.
template <std::size_t NC>
BasicField<NC> vertical_antiderivative(const BasicField<NC>& f) {
  const Grid& g = f.grid();
  BasicField<NC> out(f.grid_ptr(), f.repr());
  for (std::size_t c = 0; c < NC; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy)
        apply_vertical(g.antiderivative(), f.column(c, ix, iy), out.column(c, ix, iy));
  return out;
}

/// Integral over the full depth by Clenshaw–Curtis quadrature.
template <std::size_t NC>
HorizontalField<NC> vertical_integral(const BasicField<NC>& f) {
  const Grid& g = f.grid();
  HorizontalField<NC> out(f.grid_ptr(), f.repr());
  for (std::size_t c = 0; c < NC; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) out(c, ix, iy) = column_integral(g, f.column(c, ix, iy));
  return out;
}

/// Zeroes every horizontal mode outside the 2/3 band. Spectral repr required.
template <std::size_t NC>
BasicField<NC> dealias(BasicField<NC> f) {
  if (f.repr() != Repr::spectral) throw std::invalid_argument("dealias requires spectral repr");
  const Grid& g = f.grid();
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      if (g.retained(ix, iy)) continue;
      for (std::size_t c = 0; c < NC; ++c) {
        cplx* col = f.column(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k) col[k] = cplx{};
      }
    }
  return f;
}

/// L2(Omega) inner product summed over components (real part).
template <std::size_t NC>
double inner_product(const BasicField<NC>& a, const BasicField<NC>& b) {
  const Grid& g = a.grid();
  const BasicField<NC> as = transform(a, Repr::spectral);
  const BasicField<NC> bs = transform(b, Repr::spectral);
  const auto& w = g.weights();
  double s = 0.0;
  for (std::size_t c = 0; c < NC; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) {
        const cplx* pa = as.column(c, ix, iy);
        const cplx* pb = bs.column(c, ix, iy);
        for (int k = 0; k < g.npts(); ++k) s += w[k] * (pa[k] * std::conj(pb[k])).real();
      }
  return s * g.lx() * g.ly();
}

/// Squared L2 norm evaluated from the data as stored: physical values with
/// the tensor trapezoid/Clenshaw–Curtis rule, or spectral coefficients via
/// Parseval. The two agree to roundoff.
template <std::size_t NC>
double l2_squared(const BasicField<NC>& f) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (std::size_t c = 0; c < NC; ++c)
    for (int ix = 0; ix < g.nx(); ++ix)
      for (int iy = 0; iy < g.ny(); ++iy) s += column_energy(g, f.column(c, ix, iy));
  const double cell = f.repr() == Repr::physical ? 1.0 / g.horizontal_size() : 1.0;
  return s * g.lx() * g.ly() * cell;
}

/// (sum over |alpha| <= k of ||D^alpha f||^2)^{1/2}. Supports k <= 4.
template <std::size_t NC>
double sobolev_norm(const BasicField<NC>& f, int k) {
  if (k < 0 || k > 4) throw std::invalid_argument("sobolev_norm supports 0 <= k <= 4");
  const Grid& g = f.grid();
  const BasicField<NC> s = transform(f, Repr::spectral);
  std::vector<cplx> a(g.npts()), b(g.npts());
  double total = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double kx2 = 2 * ix == g.nx() ? 0.0 : g.kx(ix) * g.kx(ix);
      const double ky2 = 2 * iy == g.ny() ? 0.0 : g.ky(iy) * g.ky(iy);
      // horiz[m] = sum_{a+b<=m} kx^{2a} ky^{2b}
      std::array<double, 5> horiz{};
      for (int m = 0; m <= k; ++m) {
        double acc = 0.0;
        for (int p = 0; p <= m; ++p)
          for (int q = 0; p + q <= m; ++q) acc += std::pow(kx2, p) * std::pow(ky2, q);
        horiz[m] = acc;
      }
      for (std::size_t c = 0; c < NC; ++c) {
        const cplx* col = s.column(c, ix, iy);
        std::copy(col, col + g.npts(), a.begin());
        for (int cz = 0; cz <= k; ++cz) {
          if (cz > 0) {
            apply_vertical(g.dz(), a.data(), b.data());
            a.swap(b);
          }
          total += column_energy(g, a.data()) * horiz[k - cz];
        }
      }
    }
  return std::sqrt(total * g.lx() * g.ly());
}

/// Interpolation proxy for the H^{3/2} norm: (||f||_{H^1} ||f||_{H^2})^{1/2}.
template <std::size_t NC>
double fractional_h32_norm(const BasicField<NC>& f) {
  return std::sqrt(sobolev_norm(f, 1) * sobolev_norm(f, 2));
}

/// Quadrature-weighted L^p norm of the pointwise Euclidean magnitude,
/// p in {2, 4} or p = infinity (pass 0). Infinity is the nodal maximum.
template <std::size_t NC>
double lp_norm(const BasicField<NC>& f, int p) {
  if (p != 0 && p != 2 && p != 4) throw std::invalid_argument("lp_norm supports p in {2, 4, inf}");
  const BasicField<NC> phys = transform(f, Repr::physical);
  const Grid& g = f.grid();
  const auto& w = g.weights();
  double acc = 0.0;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy)
      for (int k = 0; k < g.npts(); ++k) {
        double mag2 = 0.0;
        for (std::size_t c = 0; c < NC; ++c) mag2 += std::norm(phys(c, ix, iy, k));
        if (p == 0) {
          acc = std::max(acc, std::sqrt(mag2));
        } else {
          acc += w[k] * (p == 2 ? mag2 : mag2 * mag2);
        }
      }
  if (p == 0) return acc;
  acc *= g.lx() * g.ly() / g.horizontal_size();
  return p == 2 ? std::sqrt(acc) : std::sqrt(std::sqrt(acc));
}

inline constexpr int kInfinity = 0;

/// Samples fn(x, y, z) -> Vec2 on the grid (physical repr).
template <class Fn>
Field sample(const GridPtr& grid, Fn&& fn) {
  Field f(grid, Repr::physical);
  for (int ix = 0; ix < grid->nx(); ++ix)
    for (int iy = 0; iy < grid->ny(); ++iy)
      for (int k = 0; k < grid->npts(); ++k) {
        const Vec2 v = fn(grid->x(ix), grid->y(iy), grid->z(k));
        f(0, ix, iy, k) = v[0];
        f(1, ix, iy, k) = v[1];
      }
  return f;
}

/// Seeded random velocity field satisfying v(-h) = 0 and dz v(0) = 0.
///
/// Each retained horizontal mode carries an independent random profile
/// p(z) = sum_m c_m s^{m+1}, s = (z+h)/h, m < 4, minus p'(0) (z+h)^2/(2h),
/// scaled by (1 + |m|)^{-slope} with |m| the integer wavenumber magnitude.
/// The result is normalized so that the nodal maximum of |v| equals `amplitude`.
Field random_field(const GridPtr& grid, std::uint64_t seed, double amplitude, double slope);

/// Pointwise horizontal divergence dx v1 + dy v2 (spectral repr).
ScalarField horizontal_divergence(const Field& v);

}  // namespace pe
