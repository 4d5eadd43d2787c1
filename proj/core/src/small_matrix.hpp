#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fracdelay/linalg.hpp"

namespace fracdelay::detail {

/// 50 significant decimal digits; used when double rounding would swamp the
/// series tolerance.
using Extended = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                               boost::multiprecision::et_off>;

template <class Real>
inline double to_double(const Real& x) {
  return static_cast<double>(x);
}

/// Dense row-major n x n matrix over an arbitrary field type.
template <class Real>
struct Mat {
  int n = 0;
  std::vector<Real> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, Real(0)) {}

  static Mat identity(int dim) {
    Mat out(dim);
    for (int i = 0; i < dim; ++i) out(i, i) = Real(1);
    return out;
  }

  static Mat from(const SquareMatrix& m) {
    Mat out(static_cast<int>(m.rows()));
    for (int r = 0; r < out.n; ++r)
      for (int c = 0; c < out.n; ++c) out(r, c) = Real(m(r, c));
    return out;
  }

  Real& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * n + c]; }
  const Real& operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * n + c]; }

  SquareMatrix to_eigen() const {
    SquareMatrix out(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) out(r, c) = to_double((*this)(r, c));
    return out;
  }

  double max_abs() const {
    double best = 0.0;
    for (const auto& x : a) best = std::max(best, std::abs(to_double(x)));
    return best;
  }

  Mat abs() const {
    Mat out(n);
    for (std::size_t i = 0; i < a.size(); ++i) out.a[i] = a[i] < Real(0) ? Real(-a[i]) : a[i];
    return out;
  }
};

/// out += x * y
template <class Real>
void mul_add(const Mat<Real>& x, const Mat<Real>& y, Mat<Real>& out) {
  const int n = x.n;
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) {
      const Real& xrk = x(r, k);
      if (xrk == Real(0)) continue;
      for (int c = 0; c < n; ++c) out(r, c) += xrk * y(k, c);
    }
}

/// out += s * x
template <class Real>
void scaled_add(const Real& s, const Mat<Real>& x, Mat<Real>& out) {
  if (s == Real(0)) return;
  for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] += s * x.a[i];
}

template <class Real>
Mat<Real> product(const Mat<Real>& x, const Mat<Real>& y) {
  Mat<Real> out(x.n);
  mul_add(x, y, out);
  return out;
}

}  // namespace fracdelay::detail
