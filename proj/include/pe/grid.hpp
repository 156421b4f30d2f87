#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace pe {

using cplx = std::complex<double>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Fourier(x, y) x Chebyshev–Lobatto(z) discretization of the periodic
/// layer [0, lx) x [0, ly) x (-h, 0).
///
/// Storage order everywhere is x outermost, then y, then z: a vertical column
/// of one horizontal mode (or one horizontal point) is contiguous. Lobatto
/// point 0 is the surface z = 0, point nz is the bottom z = -h.
class Grid {
 public:
  /// nx, ny even and >= 8; nz >= 16. Throws ValidationError otherwise.
  static GridPtr create(int nx, int ny, int nz, double lx, double ly, double h);

  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  int npts() const { return nz_ + 1; }
  double lx() const { return lx_; }
  double ly() const { return ly_; }
  double h() const { return h_; }
  double volume() const { return lx_ * ly_ * h_; }

  std::size_t horizontal_size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t size() const { return horizontal_size() * npts(); }
  std::size_t column(int ix, int iy) const {
    return (static_cast<std::size_t>(ix) * ny_ + iy) * npts();
  }
  std::size_t index(int ix, int iy, int iz) const { return column(ix, iy) + iz; }

  /// Signed integer wavenumber of FFT slot ix (in [-nx/2, nx/2)).
  int wave_x(int ix) const { return ix < nx_ / 2 ? ix : ix - nx_; }
  int wave_y(int iy) const { return iy < ny_ / 2 ? iy : iy - ny_; }
  double kx(int ix) const { return kx_[ix]; }
  double ky(int iy) const { return ky_[iy]; }
  double k2(int ix, int iy) const { return kx_[ix] * kx_[ix] + ky_[iy] * ky_[iy]; }

  double x(int ix) const { return lx_ * ix / nx_; }
  double y(int iy) const { return ly_ * iy / ny_; }
  double z(int iz) const { return z_[iz]; }
  const Eigen::VectorXd& z_nodes() const { return z_; }

  /// Clenshaw–Curtis weights on [-h, 0]; sum to h.
  const Eigen::VectorXd& weights() const { return w_; }
  /// d/dz and d^2/dz^2 on the Lobatto nodes.
  const Eigen::MatrixXd& dz() const { return d1_; }
  const Eigen::MatrixXd& dz2() const { return d2_; }
  /// Antiderivative from z = -h.
  const Eigen::MatrixXd& antiderivative() const { return integ_; }

  /// 2/3 rule: true if the mode survives dealiasing.
  bool retained(int ix, int iy) const {
    const int mx = wave_x(ix) < 0 ? -wave_x(ix) : wave_x(ix);
    const int my = wave_y(iy) < 0 ? -wave_y(iy) : wave_y(iy);
    return 3 * mx <= nx_ && 3 * my <= ny_;
  }

  double min_horizontal_spacing() const;

  /// In-place horizontal FFTs over every z level of a size() array.
  /// forward() divides by nx*ny so that mode (0,0) is the horizontal mean.
  void forward(cplx* data) const;
  void backward(cplx* data) const;

  /// Same transforms on a horizontal_size() array (single level).
  void forward_2d(cplx* data) const;
  void backward_2d(cplx* data) const;

 private:
  Grid(int nx, int ny, int nz, double lx, double ly, double h);

  struct Plans;

  int nx_, ny_, nz_;
  double lx_, ly_, h_;
  std::vector<double> kx_, ky_;
  Eigen::VectorXd z_, w_;
  Eigen::MatrixXd d1_, d2_, integ_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace pe
