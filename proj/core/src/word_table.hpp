#pragma once

#include <vector>

#include "small_matrix.hpp"

namespace fracdelay::detail {

/// words(L, j) = Q(L+1, j): length-L words in {M, N} with j copies of N.
/// Only columns j <= column_cap() are materialized; growth in either
/// direction keeps the recursion order (row L needs row L-1).
template <class Real>
class WordTable {
 public:
  WordTable(Mat<Real> m, Mat<Real> n) : m_(std::move(m)), n_(std::move(n)), zero_(m_.n) {
    rows_.push_back({Mat<Real>::identity(m_.n)});
  }

  int dimension() const { return m_.n; }
  int rows() const { return static_cast<int>(rows_.size()); }
  int column_cap() const { return cap_; }

  void ensure(int max_length, int max_column) {
    if (max_column > cap_) widen(max_column);
    while (rows() <= max_length) append_row();
  }

  /// Requires ensure(length, j) beforehand when j <= length.
  const Mat<Real>& word(int length, int j) const {
    if (j < 0 || j > length) return zero_;
    return rows_[static_cast<std::size_t>(length)][static_cast<std::size_t>(j)];
  }

 private:
  Mat<Real> next(int length, int j) const {
    // Q(L+1, j) = M Q(L, j) + N Q(L, j-1), reading row L-1 of this table.
    Mat<Real> out(m_.n);
    mul_add(m_, word(length - 1, j), out);
    mul_add(n_, word(length - 1, j - 1), out);
    return out;
  }

  void append_row() {
    const int length = rows();
    std::vector<Mat<Real>> row;
    const int last = std::min(length, cap_);
    row.reserve(static_cast<std::size_t>(last) + 1);
    for (int j = 0; j <= last; ++j) row.push_back(next(length, j));
    rows_.push_back(std::move(row));
  }

  void widen(int new_cap) {
    for (int length = 1; length < rows(); ++length) {
      auto& row = rows_[static_cast<std::size_t>(length)];
      const int last = std::min(length, new_cap);
      for (int j = static_cast<int>(row.size()); j <= last; ++j) row.push_back(next(length, j));
    }
    cap_ = new_cap;
  }

  Mat<Real> m_;
  Mat<Real> n_;
  Mat<Real> zero_;
  int cap_ = 0;
  std::vector<std::vector<Mat<Real>>> rows_;
};

/// Commuting case: words(L, j) = C(L, j) M^{L-j} N^j, built from cached
/// powers without a word table.
template <class Real>
class BinomialWords {
 public:
  BinomialWords(Mat<Real> m, Mat<Real> n) : m_(std::move(m)), n_(std::move(n)), zero_(m_.n) {
    m_pow_.push_back(Mat<Real>::identity(m_.n));
    n_pow_.push_back(Mat<Real>::identity(m_.n));
  }

  int dimension() const { return m_.n; }

  void ensure(int max_length, int max_column) {
    while (static_cast<int>(m_pow_.size()) <= max_length) m_pow_.push_back(product(m_, m_pow_.back()));
    const int cols = std::min(max_length, max_column);
    while (static_cast<int>(n_pow_.size()) <= cols) n_pow_.push_back(product(n_, n_pow_.back()));
  }

  /// Returned by value: the product is formed on request.
  Mat<Real> word(int length, int j) const {
    if (j < 0 || j > length) return zero_;
    Real coeff(1);
    for (int t = 1; t <= j; ++t) coeff = coeff * Real(length - j + t) / Real(t);
    Mat<Real> out(m_.n);
    mul_add(m_pow_[static_cast<std::size_t>(length - j)], n_pow_[static_cast<std::size_t>(j)], out);
    for (auto& x : out.a) x *= coeff;
    return out;
  }

 private:
  Mat<Real> m_;
  Mat<Real> n_;
  Mat<Real> zero_;
  std::vector<Mat<Real>> m_pow_;
  std::vector<Mat<Real>> n_pow_;
};

}  // namespace fracdelay::detail
