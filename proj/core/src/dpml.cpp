#include "fracdelay/dpml.hpp"

#include <limits>
#include <mutex>
#include <sstream>

#include "fracdelay/errors.hpp"
#include "series.hpp"

namespace fracdelay {

using detail::Extended;
using detail::Mat;
using detail::SeriesOutcome;
using detail::SeriesPoint;
using detail::SeriesShape;
using detail::SeriesStatus;
using detail::WordTable;

void TruncationPolicy::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("truncation: tol must be positive");
  if (window < 1) throw InvalidArgument("truncation: window must be positive");
  if (i_max < 1) throw InvalidArgument("truncation: i_max must be positive");
  if (divergence_growth < 1) throw InvalidArgument("truncation: divergence_growth must be positive");
}

std::string TruncationPolicy::describe() const {
  std::ostringstream os;
  os << "truncation policy {tol=" << tol << ", window=" << window << ", i_max=" << i_max
     << ", divergence_growth=" << divergence_growth << "}";
  return os.str();
}

void DpmlParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("dpml: alpha must lie in (0, 1]");
  if (delay < 1) throw InvalidArgument("dpml: delay must be at least 1");
  if (m.rows() == 0 || m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows()) {
    throw InvalidArgument("dpml: M and N must be square matrices of the same dimension");
  }
  policy.validate();
}

namespace {

constexpr double kDoubleRoundoff = std::numeric_limits<double>::epsilon() / 2;
const double kExtendedRoundoff = static_cast<double>(std::numeric_limits<Extended>::epsilon());

int delay_block(int k, int r) { return k <= 0 ? 0 : (k + r - 1) / r; }

template <class Real>
void check_status(const SeriesOutcome<Real>& res, int k, const TruncationPolicy& policy) {
  if (res.status == SeriesStatus::diverged) {
    throw DivergenceError("series diverges at k=" + std::to_string(k) + " (term norms keep growing) under " +
                          policy.describe());
  }
  if (res.status == SeriesStatus::exhausted) {
    throw DivergenceError("series did not converge at k=" + std::to_string(k) + " within " + policy.describe());
  }
}

template <class Real>
bool within_rounding(const SeriesOutcome<Real>& res, double roundoff, const TruncationPolicy& policy) {
  return roundoff * res.magnitude <= policy.tol * (1.0 + res.value.max_abs());
}

/// Double pass first; points whose rounding bound is too large are summed
/// again at the extended tier.
template <class WordsD, class WordsX>
std::vector<SquareMatrix> tiered_sum(const SeriesShape& shape, std::span<const SeriesPoint> points, WordsD& words,
                                     WordsX& words_ext, WordTable<double>& abs_words,
                                     const TruncationPolicy& policy, SeriesStats& stats) {
  std::vector<SquareMatrix> out(points.size());
  if (points.empty()) return out;
  const auto first = detail::sum_series<double>(shape, points, words, &abs_words, policy);
  std::vector<SeriesPoint> redo;
  std::vector<std::size_t> redo_at;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    check_status(first[idx], points[idx].k, policy);
    stats.max_terms = std::max(stats.max_terms, first[idx].terms);
    if (within_rounding(first[idx], kDoubleRoundoff, policy)) {
      out[idx] = first[idx].value.to_eigen();
    } else {
      redo.push_back(points[idx]);
      redo_at.push_back(idx);
    }
  }
  stats.points += static_cast<long>(points.size());
  if (redo.empty()) return out;

  const auto second = detail::sum_series<Extended>(shape, redo, words_ext, &abs_words, policy);
  for (std::size_t r = 0; r < redo.size(); ++r) {
    check_status(second[r], redo[r].k, policy);
    stats.max_terms = std::max(stats.max_terms, second[r].terms);
    if (!within_rounding(second[r], kExtendedRoundoff, policy)) {
      throw PrecisionError("series at k=" + std::to_string(redo[r].k) +
                           " loses too many digits to cancellation even at extended precision");
    }
    out[redo_at[r]] = second[r].value.to_eigen();
  }
  stats.extended_points += static_cast<long>(redo.size());
  return out;
}

template <class Real>
Mat<Real> zero_block(int n) {
  return Mat<Real>(n);
}

}  // namespace

struct Dpml::Impl {
  Impl(DpmlParams p, WordForm f)
      : params(std::move(p)),
        form(f),
        zero(SquareMatrix::Zero(params.dimension(), params.dimension())),
        identity(SquareMatrix::Identity(params.dimension(), params.dimension())) {
    const int n = params.dimension();
    const auto m_d = Mat<double>::from(params.m);
    const auto n_d = Mat<double>::from(params.n);
    const auto m_x = Mat<Extended>::from(params.m);
    const auto n_x = Mat<Extended>::from(params.n);
    powers = std::make_unique<WordTable<double>>(m_d, zero_block<double>(n));
    powers_ext = std::make_unique<WordTable<Extended>>(m_x, zero_block<Extended>(n));
    powers_abs = std::make_unique<WordTable<double>>(m_d.abs(), zero_block<double>(n));
    words_abs = std::make_unique<WordTable<double>>(m_d.abs(), n_d.abs());
    if (form == WordForm::recursive) {
      words = std::make_unique<WordTable<double>>(m_d, n_d);
      words_ext = std::make_unique<WordTable<Extended>>(m_x, n_x);
    } else {
      binomial = std::make_unique<detail::BinomialWords<double>>(m_d, n_d);
      binomial_ext = std::make_unique<detail::BinomialWords<Extended>>(m_x, n_x);
    }
    const double bound = norm1(params.m) + norm1(params.n);
    if (bound >= 1.0) {
      warnings.push_back("||M||_1 + ||N||_1 = " + std::to_string(bound) +
                         " >= 1: convergence of the series is not guaranteed");
    }
  }

  SeriesShape shape() const { return {params.alpha, params.beta - 1.0, -params.delay, params.delay}; }

  std::vector<SquareMatrix> mittag_leffler(std::span<const SeriesPoint> pts) {
    return tiered_sum(shape(), pts, *powers, *powers_ext, *powers_abs, params.policy, stats);
  }

  std::vector<SquareMatrix> delayed(std::span<const SeriesPoint> pts) {
    if (form == WordForm::recursive) {
      return tiered_sum(shape(), pts, *words, *words_ext, *words_abs, params.policy, stats);
    }
    return tiered_sum(shape(), pts, *binomial, *binomial_ext, *words_abs, params.policy, stats);
  }

  DpmlParams params;
  WordForm form;
  SquareMatrix zero;
  SquareMatrix identity;
  std::vector<std::string> warnings;

  std::mutex mutex;
  SeriesStats stats;
  std::unique_ptr<WordTable<double>> powers;
  std::unique_ptr<WordTable<Extended>> powers_ext;
  std::unique_ptr<WordTable<double>> powers_abs;
  std::unique_ptr<WordTable<double>> words;
  std::unique_ptr<WordTable<Extended>> words_ext;
  std::unique_ptr<WordTable<double>> words_abs;
  std::unique_ptr<detail::BinomialWords<double>> binomial;
  std::unique_ptr<detail::BinomialWords<Extended>> binomial_ext;
};

Dpml::Dpml(DpmlParams params, WordForm form) {
  params.validate();
  if (form == WordForm::binomial && !commutes(params.m, params.n)) {
    throw CommutativityError("dpml: binomial word form requires MN = NM");
  }
  impl_ = std::make_shared<Impl>(std::move(params), form);
}

const DpmlParams& Dpml::params() const { return impl_->params; }
WordForm Dpml::form() const { return impl_->form; }
const std::vector<std::string>& Dpml::warnings() const { return impl_->warnings; }

bool Dpml::norm_condition() const { return norm1(impl_->params.m) + norm1(impl_->params.n) < 1.0; }

SeriesStats Dpml::stats() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->stats;
}

SquareMatrix Dpml::operator()(int k) const { return range(k, k).front(); }

std::vector<SquareMatrix> Dpml::range(int first, int last) const {
  auto& im = *impl_;
  const int r = im.params.delay;
  std::vector<SquareMatrix> out;
  if (last < first) return out;
  out.resize(static_cast<std::size_t>(last - first + 1));

  std::vector<SeriesPoint> ml_points;
  std::vector<SeriesPoint> delayed_points;
  for (int k = first; k <= last; ++k) {
    auto& slot = out[static_cast<std::size_t>(k - first)];
    if (k <= -r - 1) {
      slot = im.zero;
    } else if (k == -r) {
      slot = im.identity;
    } else if (k <= 0) {
      ml_points.push_back({k, 0});
    } else {
      delayed_points.push_back({k, delay_block(k, r)});
    }
  }
  std::lock_guard lock(im.mutex);
  const auto ml = im.mittag_leffler(ml_points);
  for (std::size_t i = 0; i < ml_points.size(); ++i) out[static_cast<std::size_t>(ml_points[i].k - first)] = ml[i];
  const auto dl = im.delayed(delayed_points);
  for (std::size_t i = 0; i < delayed_points.size(); ++i) {
    out[static_cast<std::size_t>(delayed_points[i].k - first)] = dl[i];
  }
  return out;
}

SquareMatrix Dpml::delayed_branch(int k, int p) const {
  auto& im = *impl_;
  if (k < 1 - im.params.delay) throw InvalidArgument("delayed_branch: requires k >= 1 - r");
  if (p < 0) throw InvalidArgument("delayed_branch: requires p >= 0");
  const SeriesPoint pt{k, p};
  std::lock_guard lock(im.mutex);
  return im.delayed(std::span<const SeriesPoint>(&pt, 1)).front();
}

SquareMatrix Dpml::partial_sum(int k, int last_term) const {
  auto& im = *impl_;
  const int r = im.params.delay;
  if (k <= -r - 1) return im.zero;
  if (k == -r) return im.identity;
  if (last_term < 0) throw InvalidArgument("partial_sum: last_term must be non-negative");
  const SeriesPoint pt{k, delay_block(k, r)};
  std::span<const SeriesPoint> pts(&pt, 1);
  std::lock_guard lock(im.mutex);
  if (k <= 0) {
    return detail::sum_series<double>(im.shape(), pts, *im.powers, nullptr, im.params.policy, last_term)
        .front()
        .value.to_eigen();
  }
  if (im.form == WordForm::recursive) {
    return detail::sum_series<double>(im.shape(), pts, *im.words, nullptr, im.params.policy, last_term)
        .front()
        .value.to_eigen();
  }
  return detail::sum_series<double>(im.shape(), pts, *im.binomial, nullptr, im.params.policy, last_term)
      .front()
      .value.to_eigen();
}

SquareMatrix dpml_eval(const DpmlParams& params, int k) { return Dpml(params)(k); }

namespace {

void check_ml_args(const SquareMatrix& m, double alpha) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw InvalidArgument("ml_eval: M must be a non-empty square matrix");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("ml_eval: alpha must lie in (0, 1]");
}

}  // namespace

SquareMatrix ml_eval(const SquareMatrix& m, double alpha, double c, int k, int a, const TruncationPolicy& policy) {
  check_ml_args(m, alpha);
  policy.validate();
  const int n = static_cast<int>(m.rows());
  WordTable<double> powers(Mat<double>::from(m), Mat<double>(n));
  WordTable<Extended> powers_ext(Mat<Extended>::from(m), Mat<Extended>(n));
  WordTable<double> powers_abs(Mat<double>::from(m).abs(), Mat<double>(n));
  const SeriesShape shape{alpha, c, a, 1};
  const SeriesPoint pt{k, 0};
  SeriesStats stats;
  return tiered_sum(shape, std::span<const SeriesPoint>(&pt, 1), powers, powers_ext, powers_abs, policy, stats)
      .front();
}

SquareMatrix ml_partial_sum(const SquareMatrix& m, double alpha, double c, int k, int a, int last_term) {
  check_ml_args(m, alpha);
  if (last_term < 0) throw InvalidArgument("ml_partial_sum: last_term must be non-negative");
  const int n = static_cast<int>(m.rows());
  WordTable<double> powers(Mat<double>::from(m), Mat<double>(n));
  const SeriesPoint pt{k, 0};
  return detail::sum_series<double>(SeriesShape{alpha, c, a, 1}, std::span<const SeriesPoint>(&pt, 1), powers,
                                    nullptr, TruncationPolicy{}, last_term)
      .front()
      .value.to_eigen();
}

}  // namespace fracdelay
