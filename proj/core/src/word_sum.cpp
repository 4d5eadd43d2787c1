#include "fracdelay/word_sum.hpp"

#include <mutex>

#include "fracdelay/errors.hpp"
#include "word_table.hpp"

namespace fracdelay {

struct WordSumTable::Impl {
  Impl(const SquareMatrix& m, const SquareMatrix& n)
      : table(detail::Mat<double>::from(m), detail::Mat<double>::from(n)) {}
  std::mutex mutex;
  detail::WordTable<double> table;
};

WordSumTable::WordSumTable(SquareMatrix m, SquareMatrix n) : m_(std::move(m)), n_(std::move(n)) {
  if (m_.rows() != m_.cols() || n_.rows() != n_.cols() || m_.rows() != n_.rows() || m_.rows() == 0) {
    throw InvalidArgument("WordSumTable: M and N must be square matrices of the same dimension");
  }
  impl_ = std::make_unique<Impl>(m_, n_);
}

WordSumTable::~WordSumTable() = default;
WordSumTable::WordSumTable(WordSumTable&&) noexcept = default;
WordSumTable& WordSumTable::operator=(WordSumTable&&) noexcept = default;

int WordSumTable::dimension() const { return static_cast<int>(m_.rows()); }

SquareMatrix WordSumTable::operator()(int i, int j) const {
  if (i < 0 || j < -1) throw InvalidArgument("word_sum: requires i >= 0 and j >= -1");
  const int n = dimension();
  if (i == 0 || j < 0 || j > i - 1) return SquareMatrix::Zero(n, n);
  std::lock_guard lock(impl_->mutex);
  impl_->table.ensure(i - 1, j);
  return impl_->table.word(i - 1, j).to_eigen();
}

SquareMatrix word_sum(const WordSumTable& table, int i, int j) { return table(i, j); }

SquareMatrix word_sum_commutative(const SquareMatrix& m, const SquareMatrix& n, int i, int j) {
  if (m.rows() != m.cols() || n.rows() != n.cols() || m.rows() != n.rows()) {
    throw InvalidArgument("word_sum_commutative: M and N must be square matrices of the same dimension");
  }
  if (!commutes(m, n)) throw CommutativityError("word_sum_commutative: M and N do not commute");
  if (i < 0 || j < 0 || j > i) return SquareMatrix::Zero(m.rows(), m.cols());
  double coeff = 1.0;
  for (int t = 1; t <= j; ++t) coeff = coeff * (i - j + t) / t;
  return coeff * matrix_power(m, i - j) * matrix_power(n, j);
}

}  // namespace fracdelay
