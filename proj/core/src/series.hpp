#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fracdelay/dpml.hpp"
#include "small_matrix.hpp"
#include "word_table.hpp"

namespace fracdelay::detail {

/// Term i of the series at point k is
///   sum_{j=0}^{p} words(i, j) * H_{i * alpha + gamma}(k, base + j * delay).
struct SeriesShape {
  double alpha = 0.5;
  double gamma = 0.0;
  int base = 0;
  int delay = 1;
};

struct SeriesPoint {
  int k = 0;
  int p = 0;
};

enum class SeriesStatus { converged, diverged, exhausted, fixed };

template <class Real>
struct SeriesOutcome {
  Mat<Real> value;
  /// sum over terms of (i + m + 2) * |term|, |term| taken from the absolute
  /// word table when one is supplied. Multiplied by the unit roundoff this
  /// bounds the accumulated rounding error.
  double magnitude = 0.0;
  int terms = 0;
  SeriesStatus status = SeriesStatus::converged;
};

/// Sums the series for every point in one sweep over i. With last_term >= 0
/// the sum is fixed to i = 0..last_term and no stopping rule is applied.
template <class Real, class Words>
std::vector<SeriesOutcome<Real>> sum_series(const SeriesShape& shape, std::span<const SeriesPoint> points,
                                            Words& words, WordTable<double>* abs_words,
                                            const TruncationPolicy& policy, int last_term = -1) {
  const int dim = words.dimension();
  const bool fixed = last_term >= 0;
  const int budget = fixed ? last_term + 1 : policy.i_max;

  struct State {
    int small = 0;
    int growing = 0;
    double prev = 0.0;
    double prev_size = 0.0;
    double run_term = 0.0;
    double run_ratio = 0.0;
    bool active = true;
  };
  std::vector<SeriesOutcome<Real>> out(points.size());
  std::vector<State> state(points.size());
  int max_p = 0;
  int max_m = 1;
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    out[idx].value = Mat<Real>(dim);
    max_p = std::max(max_p, points[idx].p);
    max_m = std::max(max_m, points[idx].k - shape.base);
  }

  std::vector<Real> w(static_cast<std::size_t>(max_m) + 1);
  Mat<Real> term(dim);
  std::size_t remaining = points.size();

  for (int i = 0; i < budget && remaining > 0; ++i) {
    words.ensure(i, max_p);
    if (abs_words) abs_words->ensure(i, max_p);

    const Real mu = Real(i) * Real(shape.alpha) + Real(shape.gamma);
    w[0] = mu == Real(0) ? Real(1) : Real(0);
    if (max_m >= 1) w[1] = Real(1);
    for (int m = 1; m < max_m; ++m) w[m + 1] = w[m] * (Real(m) + mu) / Real(m);

    for (std::size_t idx = 0; idx < points.size(); ++idx) {
      auto& st = state[idx];
      if (!st.active) continue;
      const auto& pt = points[idx];
      std::fill(term.a.begin(), term.a.end(), Real(0));
      double abs_mag = 0.0;
      for (int j = 0; j <= std::min(pt.p, i); ++j) {
        const int m = pt.k - shape.base - j * shape.delay;
        if (m < 0) continue;
        const Real& h = w[static_cast<std::size_t>(m)];
        if (h == Real(0)) continue;
        const auto& word = words.word(i, j);
        scaled_add(h, word, term);
        if (abs_words) abs_mag += abs_words->word(i, j).max_abs() * std::abs(to_double(h));
      }
      auto& res = out[idx];
      for (std::size_t e = 0; e < term.a.size(); ++e) res.value.a[e] += term.a[e];
      res.terms = i + 1;
      const double tn = term.max_abs();
      res.magnitude += (i + (pt.k - shape.base) + 2) * (abs_words ? abs_mag : tn);
      if (fixed) continue;

      // Stop on the absolute bound when there is one: the signed terms can
      // cancel to rounding noise for long stretches before the tail starts.
      // The tail is estimated geometrically from the largest term and the
      // largest ratio of the current run of small terms.
      const double size = abs_words ? abs_mag : tn;
      const double ratio = st.prev_size > 0.0 ? size / st.prev_size : (size == 0.0 ? 0.0 : 1.0);
      const double run_term = st.small ? std::max(st.run_term, size) : size;
      const double run_ratio = st.small ? std::max(st.run_ratio, ratio) : ratio;
      const double reach =
          run_ratio < 1.0 ? run_term / (1.0 - run_ratio) : std::numeric_limits<double>::infinity();
      st.prev_size = size;
      if (run_term == 0.0 || reach <= policy.tol * (1.0 + res.value.max_abs())) {
        ++st.small;
        st.run_term = run_term;
        st.run_ratio = run_ratio;
      } else {
        st.small = 0;
      }
      if (i > policy.i_max / 2 && tn > st.prev) {
        ++st.growing;
      } else {
        st.growing = 0;
      }
      st.prev = tn;
      if (st.small >= policy.window) {
        res.status = SeriesStatus::converged;
        st.active = false;
        --remaining;
      } else if (st.growing >= policy.divergence_growth || !std::isfinite(tn)) {
        res.status = SeriesStatus::diverged;
        st.active = false;
        --remaining;
      }
    }
  }
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    if (fixed) {
      out[idx].status = SeriesStatus::fixed;
    } else if (state[idx].active) {
      out[idx].status = SeriesStatus::exhausted;
    }
  }
  return out;
}

}  // namespace fracdelay::detail
