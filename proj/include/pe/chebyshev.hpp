#pragma once

#include <Eigen/Dense>

// Chebyshev–Lobatto collocation on [-1, 1] with nodes x_j = cos(pi j / n),
// j = 0..n. Node 0 is x = +1.
namespace pe::cheb {

Eigen::VectorXd lobatto_points(int n);

/// First-derivative collocation matrix (n+1)x(n+1).
Eigen::MatrixXd diff_matrix(int n);

/// Clenshaw–Curtis weights; exact for polynomials of degree <= n.
Eigen::VectorXd clenshaw_curtis_weights(int n);

/// Maps nodal values to coefficients of T_0..T_n.
Eigen::MatrixXd values_to_coefficients(int n);

/// Nodal values of the antiderivative of the interpolant that vanishes at
/// x = -1. The degree n+1 term is kept, so the map is exact.
Eigen::MatrixXd antiderivative_matrix(int n);

}  // namespace pe::cheb
