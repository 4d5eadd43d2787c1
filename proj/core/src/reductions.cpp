#include <cmath>

#include "fracdelay/dpml.hpp"
#include "fracdelay/errors.hpp"
#include "fracdelay/grid_calculus.hpp"

namespace fracdelay {

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::delayed_exponential: return "delayed_exponential";
    case Reduction::delayed_mittag_leffler: return "delayed_mittag_leffler";
    case Reduction::mittag_leffler: return "mittag_leffler";
    case Reduction::commutative_exponential: return "commutative_exponential";
    case Reduction::perturbed_exponential: return "perturbed_exponential";
  }
  return "unknown";
}

namespace {

bool is_zero(const SquareMatrix& a) { return max_norm(a) == 0.0; }
bool unit_orders(const DpmlParams& p) { return p.alpha == 1.0 && p.beta == 1.0; }

/// C(x, j) for integer x >= 0.
double binomial(long x, int j) {
  if (j < 0 || x < j) return 0.0;
  double c = 1.0;
  for (int t = 1; t <= j; ++t) c = c * static_cast<double>(x - j + t) / t;
  return c;
}

/// Discrete delayed exponential of Diblik and Khusainov for k >= -h:
/// I on [-h, 0], sum_{j=0}^{l} B^j C(k - (j-1) h, j) for (l-1)(h+1) < k <= l(h+1).
SquareMatrix delayed_exponential(const SquareMatrix& b, int h, int k) {
  const long n = b.rows();
  if (k <= 0) return SquareMatrix::Identity(n, n);
  const int l = (k + h) / (h + 1);
  SquareMatrix acc = SquareMatrix::Zero(n, n);
  SquareMatrix power = SquareMatrix::Identity(n, n);
  for (int j = 0; j <= l; ++j) {
    acc += binomial(static_cast<long>(k) - static_cast<long>(j - 1) * h, j) * power;
    power = power * b;
  }
  return acc;
}

SquareMatrix resolvent_power(const SquareMatrix& m, long exponent) {
  const long n = m.rows();
  return matrix_power(SquareMatrix::Identity(n, n) - m, exponent);
}

}  // namespace

bool reduction_applies(const DpmlParams& p, Reduction r) {
  switch (r) {
    case Reduction::delayed_exponential: return is_zero(p.m) && unit_orders(p);
    case Reduction::delayed_mittag_leffler: return is_zero(p.m) && p.alpha == p.beta;
    case Reduction::mittag_leffler: return is_zero(p.n);
    case Reduction::commutative_exponential: return unit_orders(p) && commutes(p.m, p.n);
    case Reduction::perturbed_exponential: return unit_orders(p);
  }
  return false;
}

std::optional<Reduction> detect_reduction(const DpmlParams& params) {
  for (auto r : {Reduction::delayed_exponential, Reduction::delayed_mittag_leffler, Reduction::mittag_leffler,
                 Reduction::commutative_exponential, Reduction::perturbed_exponential}) {
    if (reduction_applies(params, r)) return r;
  }
  return std::nullopt;
}

SquareMatrix special_reduction(const DpmlParams& params, Reduction red, int k) {
  params.validate();
  if (!reduction_applies(params, red)) {
    throw PatternError("special_reduction: parameters do not match pattern " + to_string(red));
  }
  const int n = params.dimension();
  const int r = params.delay;
  if (k <= -r - 1) return SquareMatrix::Zero(n, n);
  if (k == -r) return SquareMatrix::Identity(n, n);
  const int p = k <= 0 ? 0 : (k + r - 1) / r;

  switch (red) {
    case Reduction::delayed_exponential:
      return delayed_exponential(params.n, r - 1, k);

    case Reduction::delayed_mittag_leffler: {
      // F(k) = sum_{i=0}^{p} N^i H_{i a + a - 1}(k, (i-1) r)
      SquareMatrix acc = SquareMatrix::Zero(n, n);
      SquareMatrix power = SquareMatrix::Identity(n, n);
      for (int i = 0; i <= p; ++i) {
        acc += monomial(i * params.alpha + params.alpha - 1.0, k, static_cast<long>(i - 1) * r) * power;
        power = power * params.n;
      }
      return acc;
    }

    case Reduction::mittag_leffler:
      return ml_eval(params.m, params.alpha, params.beta - 1.0, k, -r, params.policy);

    case Reduction::commutative_exponential: {
      // (I - M)^{-(k+r)} e_h^{N1 k},  N1 = (I - M)^h N,  h = r - 1.
      const int h = r - 1;
      const SquareMatrix n1 = resolvent_power(params.m, h) * params.n;
      return resolvent_power(params.m, -(static_cast<long>(k) + r)) * delayed_exponential(n1, h, k);
    }

    case Reduction::perturbed_exponential: {
      // Fundamental matrix of (I - M) X(k) = X(k-1) + N X(k-r), X = (I - M)^{-(k+r)} on [1-r, 0].
      const SquareMatrix id = SquareMatrix::Identity(n, n);
      Eigen::FullPivLU<SquareMatrix> lu(id - params.m);
      if (!lu.isInvertible()) throw SingularityError("special_reduction: I - M is singular");
      std::vector<SquareMatrix> x;  // x[t] = X(t + 1 - r)
      const SquareMatrix step = lu.inverse();
      SquareMatrix value = step;
      for (int t = 1 - r; t <= std::min(k, 0); ++t) {
        x.push_back(value);
        value = value * step;
      }
      for (int t = 1; t <= k; ++t) {
        const SquareMatrix& prev = x[static_cast<std::size_t>(t - 1 + r - 1)];
        const SquareMatrix& lagged = x[static_cast<std::size_t>(t - r + r - 1)];
        x.push_back(lu.solve(prev + params.n * lagged));
      }
      return x.back();
    }
  }
  throw PatternError("special_reduction: unknown pattern");
}

SquareMatrix special_reductions(const DpmlParams& params, int k) {
  const auto red = detect_reduction(params);
  if (!red) throw PatternError("special_reductions: parameters match no reduction pattern");
  return special_reduction(params, *red, k);
}

}  // namespace fracdelay
