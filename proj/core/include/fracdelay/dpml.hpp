#pragma once

// Discrete delayed perturbation of the nabla Mittag-Leffler matrix function
//
//   D(k) = 0                                            k <= -r - 1
//          I                                            k  = -r
//          sum_i M^i H_{i a + b - 1}(k, -r)             1 - r <= k <= 0
//          sum_i sum_{j=0}^{p} Q(i+1, j) H_{i a + b - 1}(k, (j-1) r)
//                                                       (p-1) r < k <= p r
//
// and the plain nabla Mittag-Leffler matrix series sum_i M^i H_{i a + c}(k, a).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fracdelay/linalg.hpp"

namespace fracdelay {

/// When to stop summing over i.
struct TruncationPolicy {
  /// Stop once `window` consecutive terms, together with a geometric
  /// estimate of the tail after them, stay below
  /// tol * (1 + max-norm of the partial sum). Term sizes are taken from the
  /// series with |M| and |N| in place of M and N, which bounds the real terms
  /// and does not cancel.
  double tol = 1e-12;
  int window = 3;
  /// Term budget; reaching it without meeting the stop rule is divergence.
  int i_max = 500;
  /// Past i_max / 2, this many consecutive growing terms is divergence.
  int divergence_growth = 10;

  void validate() const;
  std::string describe() const;
};

struct DpmlParams {
  double alpha = 0.5;
  double beta = 0.5;
  int delay = 1;
  SquareMatrix m;
  SquareMatrix n;
  TruncationPolicy policy{};

  /// alpha in (0, 1], delay >= 1, M and N square of one dimension.
  void validate() const;
  int dimension() const { return static_cast<int>(m.rows()); }
};

/// How Q(i+1, j) is produced inside the series.
enum class WordForm {
  recursive,  ///< memoized word-sum table, any M, N
  binomial,   ///< C(i, j) M^{i-j} N^j, commuting M, N only
};

/// Diagnostics of the evaluations an instance has performed so far.
struct SeriesStats {
  long points = 0;            ///< k values summed adaptively
  long extended_points = 0;   ///< of which needed the extended-precision tier
  int max_terms = 0;          ///< most terms any single k needed
};

/// Evaluator for one parameter set. Copies share the memoized word tables;
/// every member is safe to call concurrently.
class Dpml {
 public:
  explicit Dpml(DpmlParams params, WordForm form = WordForm::recursive);

  /// D(k). Throws DivergenceError or PrecisionError.
  SquareMatrix operator()(int k) const;

  /// D(first), ..., D(last) in one pass over the series index.
  std::vector<SquareMatrix> range(int first, int last) const;

  /// Fixed partial sum over i = 0..last_term in double precision, with no
  /// convergence checks. Used where the series is known not to converge.
  SquareMatrix partial_sum(int k, int last_term) const;

  /// The delayed-branch formula with an explicit upper index p, for any
  /// k >= 1 - r. With p = 0 it must agree with the Mittag-Leffler branch.
  SquareMatrix delayed_branch(int k, int p) const;

  const DpmlParams& params() const;
  WordForm form() const;

  /// ||M||_1 + ||N||_1 < 1, a sufficient condition for convergence.
  bool norm_condition() const;
  const std::vector<std::string>& warnings() const;
  SeriesStats stats() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

SquareMatrix dpml_eval(const DpmlParams& params, int k);

/// sum_i M^i H_{i alpha + c}(k, a), truncated per policy.
SquareMatrix ml_eval(const SquareMatrix& m, double alpha, double c, int k, int a,
                     const TruncationPolicy& policy = {});

/// Fixed partial sum of the same series over i = 0..last_term.
SquareMatrix ml_partial_sum(const SquareMatrix& m, double alpha, double c, int k, int a, int last_term);

/// Parameter patterns under which D collapses to a known function.
enum class Reduction {
  delayed_exponential,      ///< M = 0, alpha = beta = 1: e_h^{Nk}, h = r - 1
  delayed_mittag_leffler,   ///< M = 0, alpha = beta: delayed Mittag-Leffler F_r
  mittag_leffler,           ///< N = 0: E_{M, alpha, beta-1}(k, -r)
  commutative_exponential,  ///< alpha = beta = 1, MN = NM: factored exponential form
  perturbed_exponential,    ///< alpha = beta = 1: delayed perturbed exponential X
};

std::string to_string(Reduction r);
bool reduction_applies(const DpmlParams& params, Reduction r);

/// Most specific applicable pattern, if any.
std::optional<Reduction> detect_reduction(const DpmlParams& params);

/// Value of the reduced function at k computed from its own definition.
/// Every member is placed on the domain of D: zero below -r and I at -r.
/// Throws PatternError when the parameters do not match.
SquareMatrix special_reduction(const DpmlParams& params, Reduction r, int k);

/// special_reduction with the pattern picked by detect_reduction.
SquareMatrix special_reductions(const DpmlParams& params, int k);

}  // namespace fracdelay
