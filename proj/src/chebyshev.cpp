#include "pe/chebyshev.hpp"

#include <cmath>
#include <numbers>

namespace pe::cheb {

Eigen::VectorXd lobatto_points(int n) {
  Eigen::VectorXd x(n + 1);
  for (int j = 0; j <= n; ++j) x[j] = std::cos(std::numbers::pi * j / n);
  // exact symmetry
  for (int j = 0; j <= n / 2; ++j) {
    const double s = 0.5 * (x[j] - x[n - j]);
    x[j] = s;
    x[n - j] = -s;
  }
  if (n % 2 == 0) x[n / 2] = 0.0;
  return x;
}

Eigen::MatrixXd diff_matrix(int n) {
  const Eigen::VectorXd x = lobatto_points(n);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto c = [n](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = c(i) / c(j) * sign / (x[i] - x[j]);
    }
  }
  // negative-sum trick for the diagonal
  for (int i = 0; i <= n; ++i) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j)
      if (j != i) s += d(i, j);
    d(i, i) = -s;
  }
  return d;
}

Eigen::VectorXd clenshaw_curtis_weights(int n) {
  const double pi = std::numbers::pi;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n - 1);
  if (n % 2 == 0) {
    w[0] = w[n] = 1.0 / (n * n - 1.0);
    for (int k = 1; k < n / 2; ++k)
      for (int i = 1; i < n; ++i) v[i - 1] -= 2.0 * std::cos(2.0 * k * pi * i / n) / (4.0 * k * k - 1.0);
    for (int i = 1; i < n; ++i) v[i - 1] -= std::cos(n * pi * i / n) / (n * n - 1.0);
  } else {
    w[0] = w[n] = 1.0 / (n * n);
    for (int k = 1; k <= (n - 1) / 2; ++k)
      for (int i = 1; i < n; ++i) v[i - 1] -= 2.0 * std::cos(2.0 * k * pi * i / n) / (4.0 * k * k - 1.0);
  }
  for (int i = 1; i < n; ++i) w[i] = 2.0 * v[i - 1] / n;
  return w;
}

Eigen::MatrixXd values_to_coefficients(int n) {
  const double pi = std::numbers::pi;
  Eigen::MatrixXd m(n + 1, n + 1);
  for (int k = 0; k <= n; ++k) {
    const double ck = (k == 0 || k == n) ? 2.0 : 1.0;
    for (int j = 0; j <= n; ++j) {
      const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
      m(k, j) = 2.0 / (n * ck * cj) * std::cos(pi * j * k / n);
    }
  }
  return m;
}

Eigen::MatrixXd antiderivative_matrix(int n) {
  const double pi = std::numbers::pi;
  const Eigen::MatrixXd to_coef = values_to_coefficients(n);
  // b = B a, coefficients of T_0..T_{n+1} of the antiderivative (b_0 free, set 0)
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n + 2, n + 1);
  for (int k = 1; k <= n + 1; ++k) {
    const double ckm1 = (k - 1 == 0) ? 2.0 : 1.0;
    if (k - 1 <= n) b(k, k - 1) += ckm1 / (2.0 * k);
    if (k + 1 <= n) b(k, k + 1) -= 1.0 / (2.0 * k);
  }
  // evaluate at the nodes minus the value at x = -1
  Eigen::MatrixXd eval(n + 1, n + 2);
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= n + 1; ++k)
      eval(i, k) = std::cos(pi * k * i / n) - ((k % 2 == 0) ? 1.0 : -1.0);
  return eval * b * to_coef;
}

}  // namespace pe::cheb
