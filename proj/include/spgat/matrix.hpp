// Dense row-major matrix and CSR sparse matrix with the few kernels the
// rest of the library needs. Single-threaded with fixed loop order so that
// results are bit-reproducible across runs.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spgat {

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// C = A * B, k-blocked so the B panel stays cache resident.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()));
  const std::size_t n = a.rows(), m = b.cols(), inner = a.cols();
  Matrix c(n, m, 0.0);
  constexpr std::size_t kb = 64;
  for (std::size_t k0 = 0; k0 < inner; k0 += kb) {
    const std::size_t k1 = std::min(inner, k0 + kb);
    for (std::size_t i = 0; i < n; ++i) {
      double* ci = c.row(i);
      for (std::size_t k = k0; k < k1; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* bk = b.row(k);
        for (std::size_t j = 0; j < m; ++j) ci[j] += aik * bk[j];
      }
    }
  }
  return c;
}

inline void add_inplace(Matrix& a, const Matrix& b, double scale = 1.0) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("add_inplace: shape mismatch");
  double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) pa[i] += scale * pb[i];
}

inline void scale_inplace(Matrix& a, double s) {
  double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) p[i] *= s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

inline bool all_finite(const Matrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

// Zero out entries with |value| < t.
inline void sparsify(Matrix& a, double t) {
  if (t <= 0.0) return;
  double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(p[i]) < t) p[i] = 0.0;
}

inline std::size_t count_nonzeros(const Matrix& a) {
  std::size_t nnz = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.data()[i] != 0.0) ++nnz;
  return nnz;
}

// Compressed sparse rows. Values are kept in double in memory; the on-disk
// container quantizes to float32 (see wavelet_cache.hpp).
struct CsrMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<std::int64_t> row_ptr;  // rows + 1
  std::vector<std::int64_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
};

inline CsrMatrix csr_from_dense(const Matrix& a, double threshold = 0.0) {
  CsrMatrix s;
  s.rows = a.rows();
  s.cols = a.cols();
  s.row_ptr.reserve(a.rows() + 1);
  s.row_ptr.push_back(0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (r[j] != 0.0 && std::fabs(r[j]) >= threshold) {
        s.col_idx.push_back(static_cast<std::int64_t>(j));
        s.values.push_back(r[j]);
      }
    }
    s.row_ptr.push_back(static_cast<std::int64_t>(s.values.size()));
  }
  return s;
}

inline Matrix csr_to_dense(const CsrMatrix& s) {
  Matrix a(s.rows, s.cols, 0.0);
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::int64_t k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k)
      a(i, static_cast<std::size_t>(s.col_idx[k])) = s.values[k];
  return a;
}

// C = S * B with S sparse and B dense.
inline Matrix csr_matmul(const CsrMatrix& s, const Matrix& b) {
  if (s.cols != b.rows())
    throw std::invalid_argument("csr_matmul: inner dimensions " + std::to_string(s.cols) +
                                " vs " + std::to_string(b.rows()));
  const std::size_t m = b.cols();
  Matrix c(s.rows, m, 0.0);
  for (std::size_t i = 0; i < s.rows; ++i) {
    double* ci = c.row(i);
    for (std::int64_t k = s.row_ptr[i]; k < s.row_ptr[i + 1]; ++k) {
      const double v = s.values[k];
      const double* bk = b.row(static_cast<std::size_t>(s.col_idx[k]));
      for (std::size_t j = 0; j < m; ++j) ci[j] += v * bk[j];
    }
  }
  return c;
}

}  // namespace spgat
