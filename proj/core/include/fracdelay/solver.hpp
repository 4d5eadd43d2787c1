#pragma once

// Linear delayed system with a nabla Riemann-Liouville difference of order
// alpha in (0, 1), base -r:
//
//   sum_{s=1-r}^{k} H_{-alpha-1}(k, s-1) z(s) = M z(k) + N z(k-r) + f(k),  k >= 1,
//   z(k) = phi(k),                                                         1-r <= k <= 0.

#include <optional>
#include <string>
#include <vector>

#include "fracdelay/dpml.hpp"
#include "fracdelay/grid_calculus.hpp"
#include "fracdelay/linalg.hpp"

namespace fracdelay {

/// Forcing term f(k), k >= 1.
class Forcing {
 public:
  enum class Kind { zero, constant, table };

  static Forcing zero() { return Forcing(); }
  static Forcing constant(Vector value);
  /// Samples on [1, K].
  static Forcing table(GridSeries values);

  Kind kind() const { return kind_; }
  Vector at(int k, int dimension) const;
  const Vector& constant_value() const { return constant_; }
  const GridSeries& table_values() const { return table_; }

 private:
  Kind kind_ = Kind::zero;
  Vector constant_;
  GridSeries table_;
};

struct DelaySystem {
  double alpha = 0.5;
  int delay = 2;
  SquareMatrix m;
  SquareMatrix n;
  GridSeries phi;  ///< exactly [1-r, 0]
  Forcing forcing;
  int horizon = 1;
  TruncationPolicy policy{};

  int dimension() const { return static_cast<int>(m.rows()); }
  void validate() const;

  DelaySystem with_phi(GridSeries p) const;
  DelaySystem with_forcing(Forcing f) const;
  DpmlParams dpml_params() const;
};

struct SolutionTrace {
  GridSeries values;
  /// Max-norm of the defining-equation residual at k = 1..K (index k - 1);
  /// empty when not computed.
  std::vector<double> residuals;
  /// 1-norm condition number of I - M, when the stepping oracle produced the trace.
  std::optional<double> condition;
};

/// Sequential solution of the defining sum equation. The weight on z(k) in
/// the difference is 1, so each step solves (I - M) z(k) = rhs.
/// Throws SingularityError when I - M is singular.
SolutionTrace step_solve(const DelaySystem& sys);

/// Residual max-norms of the defining equation at k = 1..K for a candidate
/// trace covering [1-r, K].
std::vector<double> defining_residuals(const DelaySystem& sys, const GridSeries& z);

/// D(k)(I - M) phi(1-r) + sum_{s=2-r}^{min(k,0)} D(k-r-(s-1)) (nabla^alpha phi(s) - M phi(s)).
Vector homogeneous_part(const DelaySystem& sys, int k);

/// sum_{s=1}^{k} D(k-r-(s-1)) f(s); zero for k <= 0.
Vector forced_part(const DelaySystem& sys, int k);

/// homogeneous_part + forced_part on [1-r, K].
SolutionTrace closed_form_solve(const DelaySystem& sys);

/// closed_form_solve with the word sums replaced by C(i, j) M^{i-j} N^j.
/// Throws CommutativityError when MN != NM.
SolutionTrace commutative_solve(const DelaySystem& sys);

/// The same solution written with delta sums sum_{s=a}^{b-1} in delta time:
///
///   w(k) = sum_{s=-r}^{min(k-2,-1)} D(k-1-r-s) g(s) + sum_{s=0}^{k-2} D(k-1-r-s) f_delta(s),
///
/// with g(s) = nabla^alpha phi(s+1) - M phi(s+1), f_delta(s) = f(s+1) and
/// w(k) = z(k-1). The returned series covers [2-r, K+1].
SolutionTrace delta_solve(const DelaySystem& sys);

/// Shifts a delta-time trace back to nabla time (k -> k - 1).
SolutionTrace to_nabla_time(const SolutionTrace& delta_trace);

struct VerifyReport {
  SolutionTrace oracle;
  std::optional<SolutionTrace> closed_form;
  std::string failure;  ///< why closed_form or oracle is missing

  /// max_k |closed - oracle|_max / (1 + |oracle|_max)
  double max_deviation = 0.0;
  int worst_deviation_k = 0;
  /// Defining-equation residual of the closed form, scaled by
  /// 1 + max_{s<=k} |z(s)|_max + |f(k)|_max.
  double max_residual = 0.0;
  int worst_residual_k = 0;
  double tol = 0.0;
  bool oracle_available = false;
  bool diverged = false;
  bool pass = false;
};

VerifyReport verify(const DelaySystem& sys, double tol);

}  // namespace fracdelay
