#include "pe/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "pe/chebyshev.hpp"
#include "pe/errors.hpp"

namespace pe {

namespace {

// FFTW's planner is not thread safe; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Grid::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_plan fwd2 = nullptr;
  fftw_plan bwd2 = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    for (fftw_plan p : {fwd, bwd, fwd2, bwd2})
      if (p) fftw_destroy_plan(p);
  }
};

GridPtr Grid::create(int nx, int ny, int nz, double lx, double ly, double h) {
  if (nx < 8 || nx % 2 != 0) throw ValidationError("nx must be even and >= 8");
  if (ny < 8 || ny % 2 != 0) throw ValidationError("ny must be even and >= 8");
  if (nz < 16) throw ValidationError("nz must be >= 16");
  if (!(lx > 0.0) || !(ly > 0.0) || !(h > 0.0) || !std::isfinite(lx) || !std::isfinite(ly) ||
      !std::isfinite(h)) {
    throw ValidationError("grid extents lx, ly, h must be finite and > 0");
  }
  return GridPtr(new Grid(nx, ny, nz, lx, ly, h));
}

Grid::Grid(int nx, int ny, int nz, double lx, double ly, double h)
    : nx_(nx), ny_(ny), nz_(nz), lx_(lx), ly_(ly), h_(h), plans_(std::make_unique<Plans>()) {
  const double two_pi = 2.0 * std::numbers::pi;
  kx_.resize(nx_);
  ky_.resize(ny_);
  for (int i = 0; i < nx_; ++i) kx_[i] = two_pi / lx_ * wave_x(i);
  for (int j = 0; j < ny_; ++j) ky_[j] = two_pi / ly_ * wave_y(j);

  const Eigen::VectorXd x = cheb::lobatto_points(nz_);
  z_ = 0.5 * h_ * (x.array() - 1.0);
  z_[0] = 0.0;
  z_[nz_] = -h_;
  w_ = 0.5 * h_ * cheb::clenshaw_curtis_weights(nz_);
  d1_ = (2.0 / h_) * cheb::diff_matrix(nz_);
  d2_ = d1_ * d1_;
  integ_ = (0.5 * h_) * cheb::antiderivative_matrix(nz_);

  std::vector<cplx> scratch(size());
  std::vector<cplx> scratch2(horizontal_size());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  auto* buf2 = reinterpret_cast<fftw_complex*>(scratch2.data());
  const int dims[2] = {nx_, ny_};
  const int stride = npts();
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::lock_guard lock(planner_mutex());
  plans_->fwd = fftw_plan_many_dft(2, dims, npts(), buf, nullptr, stride, 1, buf, nullptr, stride,
                                   1, FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_many_dft(2, dims, npts(), buf, nullptr, stride, 1, buf, nullptr, stride,
                                   1, FFTW_BACKWARD, flags);
  plans_->fwd2 = fftw_plan_dft_2d(nx_, ny_, buf2, buf2, FFTW_FORWARD, flags);
  plans_->bwd2 = fftw_plan_dft_2d(nx_, ny_, buf2, buf2, FFTW_BACKWARD, flags);
}

Grid::~Grid() = default;

double Grid::min_horizontal_spacing() const { return std::min(lx_ / nx_, ly_ / ny_); }

void Grid::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd, p, p);
  const double scale = 1.0 / static_cast<double>(horizontal_size());
  for (std::size_t i = 0, n = size(); i < n; ++i) data[i] *= scale;
}

void Grid::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd, p, p);
}

void Grid::forward_2d(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->fwd2, p, p);
  const double scale = 1.0 / static_cast<double>(horizontal_size());
  for (std::size_t i = 0, n = horizontal_size(); i < n; ++i) data[i] *= scale;
}

void Grid::backward_2d(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->bwd2, p, p);
}

}  // namespace pe
