// Spectral graph wavelets. The exact route filters the eigensystem with the
// heat kernel g_s(lambda) = exp(-s*lambda); the fast route approximates the
// same filters with a Chebyshev polynomial in the Laplacian whose
// coefficients come from the modified Bessel table:
//
//   exp(-s*lambda)            c_i = 2 exp(-a) (-1)^i I_i(a)
//   exp(+s*lambda)            c_i = 2 exp(+a)        I_i(a)
//   exp(-s*(lmax - lambda))   c_i = 2 exp(-a)        I_i(a)
//
// with a = s*lmax/2, evaluated as (1/2)c_0 + sum_i c_i T_i(Lt) over the
// rescaled Laplacian Lt = (2/lmax) L - I via the three-term recurrence.

#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "spgat/bessel.hpp"
#include "spgat/eigensolver.hpp"
#include "spgat/graph.hpp"
#include "spgat/matrix.hpp"

namespace spgat {

enum class Provenance { exact, chebyshev };
enum class KernelSign { forward, inverse };  // exp(-s*lambda) / exp(+s*lambda)

struct WaveletBasis {
  Matrix psi;       // n x n, symmetric
  Matrix psi_inv;   // n x n, symmetric
  double scale = 1.0;
  double threshold = 0.0;
  Provenance provenance = Provenance::exact;
  int cheby_order = 0;  // meaningful for chebyshev provenance
  // Retained for frequency splitting; null for the chebyshev route.
  std::shared_ptr<const EigenSystem> eig;
};

// psi = U g(Lambda) U^T for diagonal kernel values g.
inline Matrix filter_eigensystem(const EigenSystem& eig, const std::vector<double>& g) {
  const std::size_t n = eig.eigenvalues.size();
  Matrix scaled = eig.eigenvectors;  // columns scaled by kernel values
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= g[j];
  return matmul(scaled, transpose(eig.eigenvectors));
}

inline WaveletBasis heat_wavelets(const EigenSystem& eig, double s, double t) {
  if (!(s > 0.0)) throw std::invalid_argument("heat_wavelets: scale must be positive");
  if (s > 50.0) throw std::invalid_argument("heat_wavelets: scale above 50 rejected (overflow)");
  if (t < 0.0) throw std::invalid_argument("heat_wavelets: negative threshold");
  const std::size_t n = eig.eigenvalues.size();
  std::vector<double> fwd(n), inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    fwd[i] = std::exp(-s * eig.eigenvalues[i]);
    inv[i] = std::exp(s * eig.eigenvalues[i]);
  }
  WaveletBasis basis;
  basis.psi = filter_eigensystem(eig, fwd);
  basis.psi_inv = filter_eigensystem(eig, inv);
  sparsify(basis.psi, t);
  sparsify(basis.psi_inv, t);
  basis.scale = s;
  basis.threshold = t;
  basis.provenance = Provenance::exact;
  basis.eig = std::make_shared<EigenSystem>(eig);
  return basis;
}

// ---------------------------------------------------------------------------
// Chebyshev approximation
// ---------------------------------------------------------------------------

struct ChebyshevCoeffs {
  int order = 0;                // M
  std::vector<double> coeffs;   // c_0 .. c_M (evaluation halves c_0)
  double scale = 0.0;
  double lambda_max = 2.0;
};

enum class SpectralKernel { heat, inverse_heat, reflected_heat };

inline ChebyshevCoeffs chebyshev_coeffs(double s, int order, double lambda_max,
                                        SpectralKernel kernel) {
  if (order < 1) throw std::invalid_argument("chebyshev_coeffs: order must be >= 1");
  if (s < 0.0) throw std::invalid_argument("chebyshev_coeffs: negative scale");
  const double a = s * lambda_max / 2.0;
  const auto table = bessel_table(a, order);  // rejects orders beyond the box
  const double front = kernel == SpectralKernel::inverse_heat ? std::exp(a) : std::exp(-a);
  const double alt = kernel == SpectralKernel::heat ? -1.0 : 1.0;
  ChebyshevCoeffs c;
  c.order = order;
  c.scale = s;
  c.lambda_max = lambda_max;
  c.coeffs.resize(static_cast<std::size_t>(order) + 1);
  double sign = 1.0;
  for (int i = 0; i <= order; ++i) {
    c.coeffs[i] = 2.0 * front * sign * table[i];
    sign *= alt;
  }
  return c;
}

// Counts applications of the rescaled Laplacian during kernel evaluation;
// order M costs exactly M of them.
struct ChebyProbe {
  int apply_count = 0;
};

inline CsrMatrix rescaled_laplacian(const NormalizedOperators& ops, double lambda_max) {
  CsrMatrix lt = ops.laplacian;
  const double scale = 2.0 / lambda_max;
  for (std::size_t i = 0; i < lt.rows; ++i)
    for (std::int64_t k = lt.row_ptr[i]; k < lt.row_ptr[i + 1]; ++k) {
      lt.values[k] *= scale;
      if (static_cast<std::size_t>(lt.col_idx[k]) == i) lt.values[k] -= 1.0;
    }
  return lt;
}

// (1/2) c_0 I + sum_{i>=1} c_i T_i(Lt) via T_0 = I, T_1 = Lt,
// T_{i+1} = 2 Lt T_i - T_{i-1}.
inline Matrix chebyshev_kernel(const NormalizedOperators& ops, const ChebyshevCoeffs& c,
                               ChebyProbe* probe = nullptr) {
  const std::size_t n = ops.n;
  const CsrMatrix lt = rescaled_laplacian(ops, c.lambda_max);

  Matrix acc(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) acc(i, i) = 0.5 * c.coeffs[0];

  Matrix t_prev = Matrix::identity(n);
  Matrix t_curr = csr_to_dense(lt);  // T_1 = Lt applied to the identity
  if (probe) ++probe->apply_count;
  add_inplace(acc, t_curr, c.coeffs[1]);

  for (int i = 2; i <= c.order; ++i) {
    Matrix t_next = csr_matmul(lt, t_curr);
    if (probe) ++probe->apply_count;
    scale_inplace(t_next, 2.0);
    add_inplace(t_next, t_prev, -1.0);
    add_inplace(acc, t_next, c.coeffs[i]);
    t_prev = std::move(t_curr);
    t_curr = std::move(t_next);
  }
  return acc;
}

// Wavelet pair by Chebyshev approximation: the requested sign lands in psi,
// the opposite one in psi_inv.
inline WaveletBasis chebyshev_wavelets(const NormalizedOperators& ops, double s, int order,
                                       double t, KernelSign sign = KernelSign::forward,
                                       double lambda_max = 2.0, ChebyProbe* probe = nullptr) {
  if (t < 0.0) throw std::invalid_argument("chebyshev_wavelets: negative threshold");
  const auto fwd = chebyshev_coeffs(s, order, lambda_max, SpectralKernel::heat);
  const auto inv = chebyshev_coeffs(s, order, lambda_max, SpectralKernel::inverse_heat);
  WaveletBasis basis;
  if (sign == KernelSign::forward) {
    basis.psi = chebyshev_kernel(ops, fwd, probe);
    basis.psi_inv = chebyshev_kernel(ops, inv, probe);
  } else {
    basis.psi = chebyshev_kernel(ops, inv, probe);
    basis.psi_inv = chebyshev_kernel(ops, fwd, probe);
  }
  sparsify(basis.psi, t);
  sparsify(basis.psi_inv, t);
  basis.scale = s;
  basis.threshold = t;
  basis.provenance = Provenance::chebyshev;
  basis.cheby_order = order;
  return basis;
}

// Complementary low/high-pass pair for the fast variant: K_L approximates
// exp(-s*lambda), K_H approximates exp(-s*(lmax-lambda)). Both are
// polynomials in L, hence symmetric and commuting with it.
struct BranchKernels {
  Matrix low, high;
};

inline BranchKernels chebyshev_branch_operators(const NormalizedOperators& ops, double s,
                                                int order, double t,
                                                double lambda_max = 2.0,
                                                ChebyProbe* probe = nullptr) {
  const auto low_c = chebyshev_coeffs(s, order, lambda_max, SpectralKernel::heat);
  const auto high_c = chebyshev_coeffs(s, order, lambda_max, SpectralKernel::reflected_heat);
  BranchKernels k;
  k.low = chebyshev_kernel(ops, low_c, probe);
  k.high = chebyshev_kernel(ops, high_c, probe);
  sparsify(k.low, t);
  sparsify(k.high, t);
  return k;
}

// ---------------------------------------------------------------------------
// Frequency splitting and band reconstruction
// ---------------------------------------------------------------------------

// Column/row blocks of the factored basis in ascending eigenvalue order:
// psi_low column l is u_l * exp(-s*lambda_l), psi_inv_low row l is
// exp(+s*lambda_l) * u_l^T. At t=0 the per-branch products are the
// orthogonal projectors U_L U_L^T and U_H U_H^T.
struct FrequencySplit {
  std::size_t d = 0;
  Matrix psi_low, psi_inv_low;    // n x d, d x n
  Matrix psi_high, psi_inv_high;  // n x (n-d), (n-d) x n
};

inline FrequencySplit split_frequencies(const WaveletBasis& basis, std::size_t d) {
  if (basis.provenance != Provenance::exact)
    throw std::invalid_argument(
        "split_frequencies: chebyshev provenance has no eigenvector ordering; "
        "use chebyshev_branch_operators instead");
  if (!basis.eig) throw std::invalid_argument("split_frequencies: basis has no eigensystem");
  const std::size_t n = basis.eig->eigenvalues.size();
  if (d < 1 || d >= n)
    throw std::invalid_argument("split_frequencies: d=" + std::to_string(d) +
                                " out of range [1, " + std::to_string(n) + ")");

  const auto& eig = *basis.eig;
  const double s = basis.scale;
  FrequencySplit sp;
  sp.d = d;
  sp.psi_low = Matrix(n, d);
  sp.psi_inv_low = Matrix(d, n);
  sp.psi_high = Matrix(n, n - d);
  sp.psi_inv_high = Matrix(n - d, n);
  for (std::size_t l = 0; l < n; ++l) {
    const double fwd = std::exp(-s * eig.eigenvalues[l]);
    const double inv = std::exp(s * eig.eigenvalues[l]);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = eig.eigenvectors(i, l);
      if (l < d) {
        sp.psi_low(i, l) = fwd * u;
        sp.psi_inv_low(l, i) = inv * u;
      } else {
        sp.psi_high(i, l - d) = fwd * u;
        sp.psi_inv_high(l - d, i) = inv * u;
      }
    }
  }
  sparsify(sp.psi_low, basis.threshold);
  sparsify(sp.psi_inv_low, basis.threshold);
  sparsify(sp.psi_high, basis.threshold);
  sparsify(sp.psi_inv_high, basis.threshold);
  return sp;
}

enum class BandMode { low, high };

// Band-limited reconstruction of the graph: the normalized adjacency
// a_hat = I - L expanded over the chosen frequency band,
// sum_{l in band} (1 - lambda_l) u_l u_l^T. Low and high bands sum back to
// a_hat. The entries over edges are the reconstructed edge weights of the
// barbell demo.
inline Matrix band_reconstruct(const EigenSystem& eig, std::size_t d, BandMode mode) {
  const std::size_t n = eig.eigenvalues.size();
  if (d < 1 || d >= n)
    throw std::invalid_argument("band_reconstruct: d=" + std::to_string(d) +
                                " out of range [1, " + std::to_string(n) + ")");
  const std::size_t lo = mode == BandMode::low ? 0 : d;
  const std::size_t hi = mode == BandMode::low ? d : n;
  Matrix out(n, n, 0.0);
  for (std::size_t l = lo; l < hi; ++l) {
    const double w = 1.0 - eig.eigenvalues[l];
    for (std::size_t i = 0; i < n; ++i) {
      const double wi = w * eig.eigenvectors(i, l);
      if (wi == 0.0) continue;
      double* oi = out.row(i);
      for (std::size_t j = 0; j < n; ++j) oi[j] += wi * eig.eigenvectors(j, l);
    }
  }
  return out;
}

}  // namespace spgat
