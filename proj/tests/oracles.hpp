#pragma once

// Independent reference computations used by the test suites. Nothing here
// calls into the FFT or Chebyshev code of the library under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pe/field.hpp"
#include "pe/model.hpp"

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Ekman thickness in 50-digit arithmetic.
inline double thickness(double nu_z, double f) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big r = sqrt(big(2) * big(nu_z) / abs(big(f)));
  return r.convert_to<double>();
}

/// Coefficients (k1..k4) from a dense 4x4 solve of dz v(0) = tau and
/// v(-h) = v_g on the basis of the general solution (f > 0 convention).
inline std::array<double, 4> ekman_bc_solve(const pe::PhysicalParams& p) {
  const double d = std::sqrt(2.0 * p.nu_z / std::abs(p.f));
  // basis functions of (v1, v2) for each coefficient, and their z-derivatives
  auto basis = [d](int j, double z, bool deriv) -> std::array<double, 2> {
    const double t = z / d;
    const double s = std::sin(t), c = std::cos(t);
    const double em = std::exp(-t), ep = std::exp(t);
    if (!deriv) {
      switch (j) {
        case 0: return {s * em, c * em};
        case 1: return {c * em, -s * em};
        case 2: return {s * ep, -c * ep};
        default: return {c * ep, s * ep};
      }
    }
    // product rule written out term by term
    switch (j) {
      case 0: return {(c * em - s * em) / d, (-s * em - c * em) / d};
      case 1: return {(-s * em - c * em) / d, (-c * em + s * em) / d};
      case 2: return {(c * ep + s * ep) / d, (s * ep - c * ep) / d};
      default: return {(-s * ep + c * ep) / d, (c * ep + s * ep) / d};
    }
  };
  Eigen::Matrix4d m;
  Eigen::Vector4d rhs(p.tau[0], p.tau[1], p.v_g[0], p.v_g[1]);
  for (int j = 0; j < 4; ++j) {
    const auto top = basis(j, 0.0, true);
    const auto bot = basis(j, -p.h, false);
    m(0, j) = top[0];
    m(1, j) = top[1];
    m(2, j) = bot[0];
    m(3, j) = bot[1];
  }
  const Eigen::Vector4d k = m.fullPivLu().solve(rhs);
  return {k[0], k[1], k[2], k[3]};
}

/// Dense periodic first-derivative matrix on n equispaced points of [0, len)
/// (even n; the Nyquist mode is annihilated).
inline Mat fourier_d1(int n, double len) {
  Mat d = Mat::Zero(n, n);
  const double scale = 2.0 * std::numbers::pi / len;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = scale * 0.5 * sign / std::tan(k * std::numbers::pi / n);
    }
  return d;
}

/// Dense periodic second-derivative matrix (Nyquist kept).
inline Mat fourier_d2(int n, double len) {
  Mat d = Mat::Zero(n, n);
  const double scale = 2.0 * std::numbers::pi / len;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        d(i, j) = -(n * n / 12.0 + 1.0 / 6.0);
      } else {
        const int k = i - j;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double sn = std::sin(k * std::numbers::pi / n);
        d(i, j) = -sign / (2.0 * sn * sn);
      }
    }
  return scale * scale * d;
}

/// Vertical operators on z_j = h (cos(pi j / n) - 1) / 2, built from
/// barycentric weights and a Chebyshev Vandermonde matrix.
struct Vertical {
  Vec z;
  Mat d1, d2, integ;
  Vec weights;
};

inline Vertical vertical(int n, double h) {
  Vertical v;
  Vec x(n + 1), bw(n + 1);
  for (int j = 0; j <= n; ++j) {
    x[j] = std::cos(std::numbers::pi * j / n);
    bw[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n) ? 0.5 : 1.0);
  }
  Mat dx = Mat::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    double diag = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      dx(i, j) = (bw[j] / bw[i]) / (x[i] - x[j]);
      diag -= dx(i, j);
    }
    dx(i, i) = diag;
  }
  v.z = h * (x.array() - 1.0) / 2.0;
  v.d1 = (2.0 / h) * dx;
  v.d2 = v.d1 * v.d1;

  // T_k(x_j) and the map from values to Chebyshev coefficients
  Mat vand(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) vand(j, k) = std::cos(k * std::acos(std::clamp(x[j], -1.0, 1.0)));
  const Mat to_coef = vand.inverse();
  auto cheb = [](int k, double t) { return std::cos(k * std::acos(std::clamp(t, -1.0, 1.0))); };
  // antiderivative from x = -1 of each T_k, evaluated at the nodes
  Mat anti(n + 1, n + 1);
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k <= n; ++k) {
      double val;
      if (k == 0) {
        val = x[j] + 1.0;
      } else if (k == 1) {
        val = 0.5 * (x[j] * x[j] - 1.0);
      } else {
        auto prim = [&](double t) { return 0.5 * (cheb(k + 1, t) / (k + 1) - cheb(k - 1, t) / (k - 1)); };
        val = prim(x[j]) - prim(-1.0);
      }
      anti(j, k) = val;
    }
  v.integ = (h / 2.0) * anti * to_coef;
  Vec moments(n + 1);
  for (int k = 0; k <= n; ++k) moments[k] = (k % 2) ? 0.0 : 2.0 / (1.0 - double(k) * k);
  v.weights = (h / 2.0) * to_coef.transpose() * moments;
  return v;
}

/// Velocity stored as plain real arrays, index ((ix*ny)+iy)*(nz+1)+iz.
struct Nodal {
  int nx, ny, np;
  std::array<Vec, 2> c;
  double& at(int comp, int ix, int iy, int iz) { return c[comp][(ix * ny + iy) * np + iz]; }
  double at(int comp, int ix, int iy, int iz) const { return c[comp][(ix * ny + iy) * np + iz]; }
};

inline Nodal from_field(const pe::Field& f) {
  const pe::Field p = pe::transform(f, pe::Repr::physical);
  const auto& g = p.grid();
  Nodal n{g.nx(), g.ny(), g.npts(), {Vec(g.size()), Vec(g.size())}};
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) n.c[c][i] = p.comp(c)[i].real();
  return n;
}

inline Nodal zeros_like(const Nodal& a) {
  Nodal n = a;
  n.c[0].setZero();
  n.c[1].setZero();
  return n;
}

/// Applies a 1-D matrix along x (axis 0), y (axis 1) or z (axis 2) of one component.
inline Vec along(const Nodal& shape, const Vec& u, const Mat& m, int axis) {
  Vec out = Vec::Zero(u.size());
  const int nx = shape.nx, ny = shape.ny, np = shape.np;
  auto id = [&](int ix, int iy, int iz) { return (ix * ny + iy) * np + iz; };
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < np; ++iz) {
        double s = 0.0;
        if (axis == 0)
          for (int j = 0; j < nx; ++j) s += m(ix, j) * u[id(j, iy, iz)];
        else if (axis == 1)
          for (int j = 0; j < ny; ++j) s += m(iy, j) * u[id(ix, j, iz)];
        else
          for (int j = 0; j < np; ++j) s += m(iz, j) * u[id(ix, iy, j)];
        out[id(ix, iy, iz)] = s;
      }
  return out;
}

/// m (x) I_n when !right, I_n (x) m when right.
inline Mat kron_identity(const Mat& m, int n, bool right = false) {
  const int r = static_cast<int>(m.rows());
  Mat out = Mat::Zero(r * n, r * n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < n; ++k) {
        if (!right)
          out(i * n + k, j * n + k) = m(i, j);
        else
          out(k * r + i, k * r + j) = m(i, j);
      }
  return out;
}

/// Dense realization of the hydrostatic operators on one grid.
struct DenseOps {
  int nx, ny, nz;
  double lx, ly, h;
  Mat dx, dy, dxx, dyy;
  Vertical vert;

  DenseOps(int nx_, int ny_, int nz_, double lx_, double ly_, double h_)
      : nx(nx_), ny(ny_), nz(nz_), lx(lx_), ly(ly_), h(h_),
        dx(fourier_d1(nx_, lx_)), dy(fourier_d1(ny_, ly_)), dxx(fourier_d2(nx_, lx_)),
        dyy(fourier_d2(ny_, ly_)), vert(vertical(nz_, h_)) {}

  Nodal shape() const { return Nodal{nx, ny, nz + 1, {Vec::Zero(std::size_t(nx) * ny * (nz + 1)), Vec::Zero(std::size_t(nx) * ny * (nz + 1))}}; }

  /// Hydrostatic projection: subtract grad_H of the 2-D potential whose
  /// Laplacian is the divergence of the vertical mean.
  Nodal project(const Nodal& v) const {
    const int np = nz + 1;
    const int m = nx * ny;
    Vec bar1(m), bar2(m);
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < ny; ++iy) {
        double a = 0.0, b = 0.0;
        for (int k = 0; k < np; ++k) {
          a += vert.weights[k] * v.at(0, ix, iy, k);
          b += vert.weights[k] * v.at(1, ix, iy, k);
        }
        bar1[ix * ny + iy] = a / h;
        bar2[ix * ny + iy] = b / h;
      }
    const Mat gx = kron_identity(dx, ny);
    const Mat gy = kron_identity(dy, nx, true);
    const Vec div = gx * bar1 + gy * bar2;
    const Mat lap = gx * gx + gy * gy;
    const Vec phi = lap.completeOrthogonalDecomposition().solve(div);
    const Vec c1 = gx * phi, c2 = gy * phi;
    Nodal out = v;
    for (int ix = 0; ix < nx; ++ix)
      for (int iy = 0; iy < ny; ++iy)
        for (int k = 0; k < np; ++k) {
          out.at(0, ix, iy, k) -= c1[ix * ny + iy];
          out.at(1, ix, iy, k) -= c2[ix * ny + iy];
        }
    return out;
  }

  /// P(v . grad_H vp + w(v) dz vp) with nodal products (no dealiasing).
  Nodal apply_F(const Nodal& v, const Nodal& vp) const {
    Nodal t = zeros_like(v);
    const Vec div = along(v, v.c[0], dx, 0) + along(v, v.c[1], dy, 1);
    const Vec w = -along(v, div, vert.integ, 2);
    for (int c = 0; c < 2; ++c) {
      const Vec ux = along(vp, vp.c[c], dx, 0);
      const Vec uy = along(vp, vp.c[c], dy, 1);
      const Vec uz = along(vp, vp.c[c], vert.d1, 2);
      t.c[c] = v.c[0].cwiseProduct(ux) + v.c[1].cwiseProduct(uy) + w.cwiseProduct(uz);
    }
    return project(t);
  }

  /// A v with the Ekman profile and shear given at the vertical nodes.
  Nodal apply_A(const Nodal& v, const pe::PhysicalParams& p, const std::array<Vec, 2>& prof,
                const std::array<Vec, 2>& shear) const {
    Nodal t = zeros_like(v);
    const Vec div = along(v, v.c[0], dx, 0) + along(v, v.c[1], dy, 1);
    const Vec w = -along(v, div, vert.integ, 2);
    const int np = nz + 1;
    for (int c = 0; c < 2; ++c) {
      const Vec ux = along(v, v.c[c], dx, 0);
      const Vec uy = along(v, v.c[c], dy, 1);
      t.c[c] = p.nu_h * (along(v, v.c[c], dxx, 0) + along(v, v.c[c], dyy, 1)) +
               p.nu_z * along(v, v.c[c], vert.d2, 2);
      for (int i = 0; i < t.c[c].size(); ++i) {
        const int k = i % np;
        t.c[c][i] -= prof[0][k] * ux[i] + prof[1][k] * uy[i] + w[i] * shear[c][k];
      }
    }
    // -f v^perp with v^perp = (-v2, v1)
    t.c[0] += p.f * v.c[1];
    t.c[1] -= p.f * v.c[0];
    return project(t);
  }
};

}  // namespace oracle
