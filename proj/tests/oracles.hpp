// Test-only oracles, kept independent of the implementation paths they
// check: a cyclic Jacobi eigensolver, a long-double Bessel series, a
// discrete least-squares Chebyshev fit, central finite differences and a
// small logistic regression.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"
#include "spgat/rng.hpp"

namespace oracle {

struct JacobiResult {
  std::vector<double> eigenvalues;  // ascending
  spgat::Matrix eigenvectors;       // columns
};

// Cyclic Jacobi rotations until all off-diagonals vanish.
inline JacobiResult jacobi_eigen(spgat::Matrix a, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  spgat::Matrix v = spgat::Matrix::identity(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  JacobiResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = spgat::Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    res.eigenvalues[c] = a(perm[c], perm[c]);
    for (std::size_t r = 0; r < n; ++r) res.eigenvectors(r, c) = v(r, perm[c]);
  }
  return res;
}

// Fixed-length extended-precision power series.
inline long double bessel_i_series(int order, long double x, int terms = 80) {
  long double term = 1.0L;
  for (int i = 1; i <= order; ++i) term *= (x / 2.0L) / i;
  long double sum = term;
  for (int m = 1; m < terms; ++m) {
    term *= (x * x / 4.0L) / (static_cast<long double>(m) * (m + order));
    sum += term;
  }
  return sum;
}

// Chebyshev value T_k(y) by recurrence.
inline double cheb_t(int k, double y) {
  double tp = 1.0, tc = y;
  if (k == 0) return 1.0;
  for (int i = 2; i <= k; ++i) {
    const double tn = 2.0 * y * tc - tp;
    tp = tc;
    tc = tn;
  }
  return tc;
}

// Least-squares fit of f over [0, lmax] in the Chebyshev basis of the
// rescaled variable, solved via normal equations with Gaussian elimination.
inline std::vector<double> chebyshev_ls_fit(const std::function<double(double)>& f,
                                            double lmax, int order, int samples = 4001) {
  const int m = order + 1;
  std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
  std::vector<double> atb(m, 0.0);
  for (int i = 0; i < samples; ++i) {
    const double lam = lmax * i / (samples - 1);
    const double y = 2.0 / lmax * lam - 1.0;
    std::vector<double> basis(m);
    for (int k = 0; k < m; ++k) basis[k] = cheb_t(k, y);
    const double target = f(lam);
    for (int r = 0; r < m; ++r) {
      atb[r] += basis[r] * target;
      for (int c = 0; c < m; ++c) ata[r][c] += basis[r] * basis[c];
    }
  }
  // gaussian elimination with partial pivoting
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::fabs(ata[r][col]) > std::fabs(ata[piv][col])) piv = r;
    std::swap(ata[col], ata[piv]);
    std::swap(atb[col], atb[piv]);
    for (int r = col + 1; r < m; ++r) {
      const double f2 = ata[r][col] / ata[col][col];
      for (int c = col; c < m; ++c) ata[r][c] -= f2 * ata[col][c];
      atb[r] -= f2 * atb[col];
    }
  }
  std::vector<double> x(m);
  for (int r = m - 1; r >= 0; --r) {
    double s = atb[r];
    for (int c = r + 1; c < m; ++c) s -= ata[r][c] * x[c];
    x[r] = s / ata[r][r];
  }
  return x;
}

// Central finite difference of a scalar function of one parameter.
inline double central_diff(const std::function<double()>& eval, double* param,
                           double eps = 1e-4) {
  const double saved = *param;
  *param = saved + eps;
  const double up = eval();
  *param = saved - eps;
  const double down = eval();
  *param = saved;
  return (up - down) / (2.0 * eps);
}

// Multinomial logistic regression on given features, plain gradient descent.
inline double logistic_regression_accuracy(const spgat::Matrix& x,
                                           const std::vector<int>& labels, int num_classes,
                                           const std::vector<std::uint32_t>& train,
                                           const std::vector<std::uint32_t>& test,
                                           int iters = 500, double lr = 0.5) {
  const std::size_t p = x.cols();
  spgat::Matrix w(p + 1, num_classes, 0.0);  // last row is the bias
  std::vector<double> logits(num_classes), probs(num_classes);
  for (int it = 0; it < iters; ++it) {
    spgat::Matrix grad(p + 1, num_classes, 0.0);
    for (auto node : train) {
      const double* xi = x.row(node);
      for (int c = 0; c < num_classes; ++c) {
        double z = w(p, c);
        for (std::size_t j = 0; j < p; ++j) z += xi[j] * w(j, c);
        logits[c] = z;
      }
      double mx = logits[0];
      for (int c = 1; c < num_classes; ++c) mx = std::max(mx, logits[c]);
      double sum = 0.0;
      for (int c = 0; c < num_classes; ++c) {
        probs[c] = std::exp(logits[c] - mx);
        sum += probs[c];
      }
      for (int c = 0; c < num_classes; ++c) {
        const double g = probs[c] / sum - (labels[node] == c ? 1.0 : 0.0);
        for (std::size_t j = 0; j < p; ++j) grad(j, c) += g * xi[j];
        grad(p, c) += g;
      }
    }
    const double step = lr / static_cast<double>(train.size());
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] -= step * grad.data()[i];
  }
  std::size_t hits = 0;
  for (auto node : test) {
    const double* xi = x.row(node);
    int best = 0;
    double best_z = -1e300;
    for (int c = 0; c < num_classes; ++c) {
      double z = w(p, c);
      for (std::size_t j = 0; j < p; ++j) z += xi[j] * w(j, c);
      if (z > best_z) {
        best_z = z;
        best = c;
      }
    }
    if (best == labels[node]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

// Deterministic random graph for tests.
inline spgat::Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  spgat::Rng rng(spgat::mix_seed(seed, 77));
  std::vector<spgat::Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) edges.emplace_back(i, j);
  return spgat::make_graph(n, std::move(edges));
}

}  // namespace oracle
