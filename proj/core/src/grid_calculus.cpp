#include "fracdelay/grid_calculus.hpp"

#include <string>

#include "fracdelay/errors.hpp"

namespace fracdelay {

GridSeries::GridSeries(int first, int dimension) : first_(first), dimension_(dimension) {
  if (dimension < 1) throw InvalidArgument("GridSeries: dimension must be positive");
}

GridSeries::GridSeries(int first, std::vector<Vector> values)
    : first_(first), values_(std::move(values)) {
  dimension_ = values_.empty() ? 1 : static_cast<int>(values_.front().size());
  if (dimension_ < 1) throw InvalidArgument("GridSeries: dimension must be positive");
  for (const auto& v : values_) {
    if (v.size() != dimension_) throw InvalidArgument("GridSeries: mixed vector dimensions");
  }
}

GridSeries GridSeries::scalar(int first, std::span<const double> values) {
  GridSeries out(first, 1);
  for (double v : values) out.push_back(Vector::Constant(1, v));
  return out;
}

const Vector& GridSeries::at(int k) const {
  if (!contains(k)) {
    throw RangeError("GridSeries: k=" + std::to_string(k) + " outside [" + std::to_string(first_) + ", " +
                     std::to_string(last()) + "]");
  }
  return values_[static_cast<std::size_t>(k - first_)];
}

Vector& GridSeries::at(int k) {
  return const_cast<Vector&>(std::as_const(*this).at(k));
}

void GridSeries::push_back(Vector v) {
  if (v.size() != dimension_) throw InvalidArgument("GridSeries: pushed vector has wrong dimension");
  values_.push_back(std::move(v));
}

double monomial(double mu, long k, long a) {
  const long m = k - a;
  if (m <= 0) return (m == 0 && mu == 0.0) ? 1.0 : 0.0;
  double p = 1.0;
  for (long t = 1; t < m; ++t) p *= (static_cast<double>(t) + mu) / static_cast<double>(t);
  return p;
}

std::vector<double> monomial_weights(double mu, int count) {
  std::vector<double> w(static_cast<std::size_t>(std::max(count, 0)), 0.0);
  if (count <= 0) return w;
  w[0] = mu == 0.0 ? 1.0 : 0.0;
  if (count > 1) w[1] = 1.0;
  for (int m = 1; m + 1 < count; ++m) w[m + 1] = w[m] * (m + mu) / m;
  return w;
}

namespace {

Vector weighted_history(double mu, int a, const GridSeries& z, int k) {
  Vector acc = Vector::Zero(z.dimension());
  if (k <= a) return acc;
  const auto w = monomial_weights(mu, k - a + 1);
  // z(s) carries weight H_mu(k, s - 1) = w[k - s + 1].
  for (int s = a + 1; s <= k; ++s) acc.noalias() += w[k - s + 1] * z.at(s);
  return acc;
}

}  // namespace

Vector nabla_sum(double alpha, int a, const GridSeries& z, int k) {
  if (!(alpha > 0.0)) throw InvalidArgument("nabla_sum: order must be positive");
  return weighted_history(alpha - 1.0, a, z, k);
}

Vector rl_difference(double alpha, int a, const GridSeries& z, int k) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("rl_difference: order must lie in (0, 1)");
  if (k < a + 1) throw InvalidArgument("rl_difference: requires k >= a + 1");
  return weighted_history(-alpha - 1.0, a, z, k);
}

}  // namespace fracdelay
