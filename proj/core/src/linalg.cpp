#include "fracdelay/linalg.hpp"

#include <algorithm>

#include "fracdelay/errors.hpp"

namespace fracdelay {

double max_norm(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double norm1(const Eigen::Ref<const Eigen::MatrixXd>& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

bool commutes(const SquareMatrix& m, const SquareMatrix& n, double tol) {
  if (m.rows() != n.rows() || m.cols() != n.cols()) return false;
  const double scale = std::max(1.0, max_norm(m) * max_norm(n));
  return max_norm(m * n - n * m) <= tol * scale;
}

SquareMatrix matrix_power(const SquareMatrix& a, long exponent) {
  if (a.rows() != a.cols()) throw InvalidArgument("matrix_power: matrix is not square");
  SquareMatrix base = a;
  if (exponent < 0) {
    Eigen::FullPivLU<SquareMatrix> lu(a);
    if (!lu.isInvertible()) throw SingularityError("matrix_power: negative power of a singular matrix");
    base = lu.inverse();
    exponent = -exponent;
  }
  SquareMatrix result = SquareMatrix::Identity(a.rows(), a.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace fracdelay
