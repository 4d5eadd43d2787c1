#pragma once

#include <Eigen/Dense>

namespace fracdelay {

using SquareMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest absolute entry.
double max_norm(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// Induced 1-norm (maximum absolute column sum).
double norm1(const Eigen::Ref<const Eigen::MatrixXd>& a);

/// True when ||MN - NM||_max <= tol * max(1, ||M||_max * ||N||_max).
bool commutes(const SquareMatrix& m, const SquareMatrix& n, double tol = 1e-12);

/// Integer power by repeated squaring; exponent may be negative when `a` is
/// invertible.
SquareMatrix matrix_power(const SquareMatrix& a, long exponent);

}  // namespace fracdelay
