// Full symmetric eigendecomposition: Householder reduction to tridiagonal
// form followed by the implicit-shift QL algorithm (the classic EISPACK
// tred2/tql2 pair). The accumulation matrix is stored with eigenvectors as
// rows so every inner loop walks contiguous memory; the public result uses
// the conventional columns-are-eigenvectors layout.
//
// Output is deterministic: eigenvalues ascending (ties kept in sweep order)
// and each eigenvector's largest-magnitude entry made positive.

#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"

namespace spgat {

class EigenError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EigenSystem {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // orthonormal columns
};

namespace detail {

// Reduce vt (= symmetric input) to tridiagonal form, accumulating the
// orthogonal transformation in vt. vt rows play the role of the usual
// column-major eigenvector storage.
inline void tred2(Matrix& vt, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = vt.rows();
  for (std::size_t j = 0; j < n; ++j) d[j] = vt(j, n - 1);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = vt(j, i - 1);
        vt(j, i) = 0.0;
        vt(i, j) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        vt(i, j) = f;
        g = e[j] + vt(j, j) * f;
        double* vj = vt.row(j);
        for (std::size_t k = j + 1; k < i; ++k) {
          g += vj[k] * d[k];
          e[k] += vj[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        double* vj = vt.row(j);
        for (std::size_t k = j; k < i; ++k) vj[k] -= f * e[k] + g * d[k];
        d[j] = vt(j, i - 1);
        vt(j, i) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate the Householder transformations.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    vt(i, n - 1) = vt(i, i);
    vt(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      const double* vi1 = vt.row(i + 1);
      for (std::size_t k = 0; k <= i; ++k) d[k] = vi1[k] / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        double* vj = vt.row(j);
        for (std::size_t k = 0; k <= i; ++k) g += vi1[k] * vj[k];
        for (std::size_t k = 0; k <= i; ++k) vj[k] -= g * d[k];
      }
    }
    double* vi1 = vt.row(i + 1);
    for (std::size_t k = 0; k <= i; ++k) vi1[k] = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = vt(j, n - 1);
    vt(j, n - 1) = 0.0;
  }
  vt(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

inline void tql2(Matrix& vt, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = vt.rows();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0, tst1 = 0.0;
  const double eps = 0x1.0p-52;
  constexpr int max_iter = 60;

  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    std::size_t m = l;
    while (m < n && std::fabs(e[m]) > eps * tst1) ++m;

    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter)
          throw EigenError("QL iteration failed to converge: n=" + std::to_string(n) +
                           ", iterations=" + std::to_string(iter));
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);

          double* lo = vt.row(i);
          double* hi = vt.row(i + 1);
          for (std::size_t k = 0; k < n; ++k) {
            const double t = hi[k];
            hi[k] = s * lo[k] + c * t;
            lo[k] = c * lo[k] - s * t;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace detail

inline EigenSystem symmetric_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("symmetric_eigen: matrix not square");
  const std::size_t n = a.rows();
  Matrix vt = a;  // symmetric, so the transposed copy equals the input
  std::vector<double> d(n), e(n, 0.0);
  if (n == 1) {
    d[0] = a(0, 0);
    vt(0, 0) = 1.0;
  } else {
    detail::tred2(vt, d, e);
    detail::tql2(vt, d, e);
  }

  // Ascending order; equal eigenvalues keep their sweep order.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    return d[x] != d[y] ? d[x] < d[y] : x < y;
  });

  EigenSystem sys;
  sys.eigenvalues.resize(n);
  sys.eigenvectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = perm[c];
    sys.eigenvalues[c] = d[src];
    const double* v = vt.row(src);
    // sign convention: first largest-magnitude entry positive
    std::size_t arg = 0;
    double best = std::fabs(v[0]);
    for (std::size_t k = 1; k < n; ++k)
      if (std::fabs(v[k]) > best) {
        best = std::fabs(v[k]);
        arg = k;
      }
    const double sign = v[arg] < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) sys.eigenvectors(r, c) = sign * v[r];
  }
  return sys;
}

inline EigenSystem eigendecompose(const NormalizedOperators& ops) {
  return symmetric_eigen(csr_to_dense(ops.laplacian));
}

}  // namespace spgat
