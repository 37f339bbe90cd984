#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "higcn/dense.hpp"
#include "higcn/errors.hpp"

namespace higcn {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Column indices are strictly ascending within a row,
// so every row-wise reduction runs in a fixed order.
class SparseMatrix {
 public:
  SparseMatrix() : row_starts_(1, 0) {}

  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_starts,
               std::vector<std::uint32_t> col_indices, std::vector<double> values)
      : rows_(rows),
        cols_(cols),
        row_starts_(std::move(row_starts)),
        col_indices_(std::move(col_indices)),
        values_(std::move(values)) {
    validate();
  }

  static SparseMatrix zero(std::size_t rows, std::size_t cols) {
    return SparseMatrix(rows, cols, std::vector<std::size_t>(rows + 1, 0), {}, {});
  }

  static SparseMatrix identity(std::size_t n, double scale = 1.0) {
    std::vector<std::size_t> starts(n + 1);
    std::vector<std::uint32_t> cols(n);
    for (std::size_t i = 0; i <= n; ++i) starts[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<std::uint32_t>(i);
    return SparseMatrix(n, n, std::move(starts), std::move(cols), std::vector<double>(n, scale));
  }

  // Duplicate coordinates are summed. Summation of duplicates follows input order
  // after a stable sort, so the result is deterministic for a given triplet list.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
      if (t.row >= rows || t.col >= cols) {
        throw UsageError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                         ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
      }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    std::vector<std::size_t> starts(rows + 1, 0);
    std::vector<std::uint32_t> col_idx;
    std::vector<double> vals;
    col_idx.reserve(triplets.size());
    vals.reserve(triplets.size());
    std::size_t i = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      while (i < triplets.size() && triplets[i].row == r) {
        const std::size_t c = triplets[i].col;
        double v = 0.0;
        while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) {
          v += triplets[i].value;
          ++i;
        }
        col_idx.push_back(static_cast<std::uint32_t>(c));
        vals.push_back(v);
      }
      starts[r + 1] = col_idx.size();
    }
    return SparseMatrix(rows, cols, std::move(starts), std::move(col_idx), std::move(vals));
  }

  static SparseMatrix from_dense(const DenseMatrix& d, double drop_below = 0.0) {
    std::vector<Triplet> t;
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c)
        if (std::abs(d(r, c)) > drop_below) t.push_back({r, c, d(r, c)});
    return from_triplets(d.rows(), d.cols(), std::move(t));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_starts() const noexcept { return row_starts_; }
  std::span<const std::uint32_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::uint32_t> row_cols(std::size_t r) const noexcept {
    return {col_indices_.data() + row_starts_[r], row_starts_[r + 1] - row_starts_[r]};
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return {values_.data() + row_starts_[r], row_starts_[r + 1] - row_starts_[r]};
  }

  // Stored value at (r, c), zero when absent.
  double at(std::size_t r, std::size_t c) const {
    auto cols = row_cols(r);
    auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(c));
    if (it == cols.end() || *it != c) return 0.0;
    return values_[row_starts_[r] + static_cast<std::size_t>(it - cols.begin())];
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      auto cols = row_cols(r);
      auto vals = row_values(r);
      for (std::size_t k = 0; k < cols.size(); ++k) d(r, cols[k]) = vals[k];
    }
    return d;
  }

 private:
  void validate() const {
    if (row_starts_.size() != rows_ + 1 || row_starts_.front() != 0 ||
        row_starts_.back() != values_.size() || col_indices_.size() != values_.size()) {
      throw UsageError("SparseMatrix: inconsistent CSR arrays");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (row_starts_[r] > row_starts_[r + 1]) throw UsageError("SparseMatrix: row_starts decreasing");
      for (std::size_t k = row_starts_[r]; k < row_starts_[r + 1]; ++k) {
        if (col_indices_[k] >= cols_) throw UsageError("SparseMatrix: column index out of range");
        if (k > row_starts_[r] && col_indices_[k] <= col_indices_[k - 1]) {
          throw UsageError("SparseMatrix: columns not strictly ascending in row " +
                           std::to_string(r));
        }
      }
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_starts_;
  std::vector<std::uint32_t> col_indices_;
  std::vector<double> values_;
};

inline std::vector<double> spmv(const SparseMatrix& m, std::span<const double> x) {
  if (x.size() != m.cols()) {
    throw UsageError("spmv: dimension mismatch (" + std::to_string(m.cols()) + " vs " +
                     std::to_string(x.size()) + ")");
  }
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * x[cols[k]];
    y[r] = s;
  }
  return y;
}

// Each output column equals spmv of the matching input column; per-entry sums run in
// ascending column order exactly like spmv.
inline DenseMatrix spmm_dense(const SparseMatrix& m, const DenseMatrix& x) {
  if (x.rows() != m.cols()) {
    throw UsageError("spmm_dense: dimension mismatch (" + std::to_string(m.cols()) + " vs " +
                     std::to_string(x.rows()) + ")");
  }
  DenseMatrix y(m.rows(), x.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    auto yrow = y.row(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      auto xrow = x.row(cols[k]);
      for (std::size_t j = 0; j < x.cols(); ++j) yrow[j] += vals[k] * xrow[j];
    }
  }
  return y;
}

inline SparseMatrix transpose(const SparseMatrix& m) {
  std::vector<std::size_t> counts(m.cols() + 1, 0);
  for (auto c : m.col_indices()) ++counts[c + 1];
  for (std::size_t c = 0; c < m.cols(); ++c) counts[c + 1] += counts[c];
  std::vector<std::size_t> starts = counts;
  std::vector<std::uint32_t> cols(m.nnz());
  std::vector<double> vals(m.nnz());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto rc = m.row_cols(r);
    auto rv = m.row_values(r);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const std::size_t dst = counts[rc[k]]++;
      cols[dst] = static_cast<std::uint32_t>(r);
      vals[dst] = rv[k];
    }
  }
  return SparseMatrix(m.cols(), m.rows(), std::move(starts), std::move(cols), std::move(vals));
}

// Sparse-sparse product a * b (row-wise Gustavson accumulation).
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw UsageError("multiply: dimension mismatch");
  std::vector<std::size_t> starts(a.rows() + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<char> touched(b.cols(), 0);
  std::vector<std::uint32_t> pattern;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    pattern.clear();
    auto ac = a.row_cols(r);
    auto av = a.row_values(r);
    for (std::size_t k = 0; k < ac.size(); ++k) {
      auto bc = b.row_cols(ac[k]);
      auto bv = b.row_values(ac[k]);
      for (std::size_t j = 0; j < bc.size(); ++j) {
        if (!touched[bc[j]]) {
          touched[bc[j]] = 1;
          pattern.push_back(bc[j]);
        }
        acc[bc[j]] += av[k] * bv[j];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (auto c : pattern) {
      cols.push_back(c);
      vals.push_back(acc[c]);
      acc[c] = 0.0;
      touched[c] = 0;
    }
    starts[r + 1] = cols.size();
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(starts), std::move(cols), std::move(vals));
}

// diag(left) * m * diag(right)
inline SparseMatrix scale_rows_cols(const SparseMatrix& m, std::span<const double> left,
                                    std::span<const double> right) {
  if (left.size() != m.rows() || right.size() != m.cols()) {
    throw UsageError("scale_rows_cols: dimension mismatch");
  }
  std::vector<std::size_t> starts(m.row_starts().begin(), m.row_starts().end());
  std::vector<std::uint32_t> cols(m.col_indices().begin(), m.col_indices().end());
  std::vector<double> vals(m.nnz());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t k = starts[r]; k < starts[r + 1]; ++k) {
      vals[k] = left[r] * m.values()[k] * right[cols[k]];
    }
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(starts), std::move(cols), std::move(vals));
}

// alpha * a + beta * b
inline SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                        double beta = 1.0) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw UsageError("add: dimension mismatch");
  std::vector<std::size_t> starts(a.rows() + 1, 0);
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto ac = a.row_cols(r);
    auto av = a.row_values(r);
    auto bc = b.row_cols(r);
    auto bv = b.row_values(r);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ac.size() || j < bc.size()) {
      if (j == bc.size() || (i < ac.size() && ac[i] < bc[j])) {
        cols.push_back(ac[i]);
        vals.push_back(alpha * av[i]);
        ++i;
      } else if (i == ac.size() || bc[j] < ac[i]) {
        cols.push_back(bc[j]);
        vals.push_back(beta * bv[j]);
        ++j;
      } else {
        cols.push_back(ac[i]);
        vals.push_back(alpha * av[i] + beta * bv[j]);
        ++i;
        ++j;
      }
    }
    starts[r + 1] = cols.size();
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(starts), std::move(cols), std::move(vals));
}

// max |m(i,j) - m(j,i)| over the stored pattern of both triangles.
inline double max_asymmetry(const SparseMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      worst = std::max(worst, std::abs(vals[k] - m.at(cols[k], r)));
    }
  }
  return worst;
}

}  // namespace higcn
