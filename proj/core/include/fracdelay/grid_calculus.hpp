#pragma once

// Nabla fractional calculus on the integer grid.
//
// The fractional Taylor monomial H_mu(k, a) = (k - a)^{rising mu} / Gamma(mu + 1)
// is evaluated through the telescoping product
//
//     H_mu(k, a) = prod_{t=1}^{m-1} (t + mu) / t,     m = k - a >= 1,
//
// which has no poles for negative orders. For m <= 0 the value is 0, except
// H_0(a, a) = 1.

#include <span>
#include <utility>
#include <vector>

#include "fracdelay/linalg.hpp"

namespace fracdelay {

/// Vector-valued samples on a contiguous integer range [first, last].
class GridSeries {
 public:
  GridSeries() = default;
  GridSeries(int first, int dimension);
  GridSeries(int first, std::vector<Vector> values);

  static GridSeries scalar(int first, std::span<const double> values);

  template <class Fn>
  static GridSeries tabulate(int first, int last, int dimension, Fn&& fn) {
    GridSeries out(first, dimension);
    for (int k = first; k <= last; ++k) out.push_back(fn(k));
    return out;
  }

  int first() const { return first_; }
  int last() const { return first_ + static_cast<int>(values_.size()) - 1; }
  int dimension() const { return dimension_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  bool contains(int k) const { return k >= first_ && k <= last(); }

  /// Throws RangeError outside [first, last].
  const Vector& at(int k) const;
  Vector& at(int k);

  void push_back(Vector v);

  const std::vector<Vector>& values() const { return values_; }

 private:
  int first_ = 0;
  int dimension_ = 1;
  std::vector<Vector> values_;
};

double monomial(double mu, long k, long a);

/// H_mu(a + m, a) for m = 0 .. count - 1, by the one-step recurrence
/// w[m + 1] = w[m] * (m + mu) / m.
std::vector<double> monomial_weights(double mu, int count);

/// sum_{s=a+1}^{k} H_{alpha-1}(k, s - 1) z(s); zero vector when k <= a.
Vector nabla_sum(double alpha, int a, const GridSeries& z, int k);

/// sum_{s=a+1}^{k} H_{-alpha-1}(k, s - 1) z(s) for alpha in (0, 1), k >= a + 1.
/// The weight on z(k) is exactly 1.
Vector rl_difference(double alpha, int a, const GridSeries& z, int k);

}  // namespace fracdelay
