#pragma once

#include <memory>

#include "fracdelay/linalg.hpp"

namespace fracdelay {

namespace detail {
template <class Real>
class WordTable;
}

/// Memoized non-commutative word sums.
///
/// Q(i+1, j) is the sum of all ordered products of i factors drawn from {M, N}
/// that contain exactly j copies of N, built from
///
///     Q(i+1, j) = M Q(i, j) + N Q(i, j-1),   Q(0, j) = Q(i, -1) = 0,  Q(1, 0) = I.
///
/// The table grows on demand; growth is serialized, so one instance may be
/// queried from several threads.
class WordSumTable {
 public:
  WordSumTable(SquareMatrix m, SquareMatrix n);
  ~WordSumTable();
  WordSumTable(WordSumTable&&) noexcept;
  WordSumTable& operator=(WordSumTable&&) noexcept;

  /// Q(i, j) for i >= 0, j >= -1.
  SquareMatrix operator()(int i, int j) const;

  int dimension() const;
  const SquareMatrix& m() const { return m_; }
  const SquareMatrix& n() const { return n_; }

 private:
  SquareMatrix m_;
  SquareMatrix n_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SquareMatrix word_sum(const WordSumTable& table, int i, int j);

/// Closed form of Q(i+1, j) for commuting M, N: C(i, j) M^{i-j} N^j for
/// 0 <= j <= i, zero otherwise. Throws CommutativityError when MN != NM.
SquareMatrix word_sum_commutative(const SquareMatrix& m, const SquareMatrix& n, int i, int j);

}  // namespace fracdelay
