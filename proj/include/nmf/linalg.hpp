#pragma once

#include <cstdint>
#include <vector>

#include "nmf/kernels.hpp"
#include "nmf/matrix.hpp"

namespace nmf {

// Leading singular triplets; sigma is non-increasing, u/v have orthonormal
// columns (residual <= 1e-8).
struct TruncatedSvd {
  DenseMatrix u;              // m x p
  std::vector<double> sigma;  // length p
  DenseMatrix v;              // n x p
};

// Seed for the subspace-iteration RNG; fixed so repeated calls on the same
// input return identical factors.
constexpr std::uint64_t kDefaultSvdSeed = 0x5eedf00d5eedf00dULL;

// Symmetric eigendecomposition by cyclic Jacobi sweeps. Returns eigenvalues
// in non-increasing order with matching orthonormal columns in vectors.
// Throws ConvergenceFailure after 100 sweeps without reaching tolerance.
void jacobi_eigh(const DenseMatrix& s, std::vector<double>& values,
                 DenseMatrix& vectors);

// Truncated SVD of rank p. Gram-matrix Jacobi eigendecomposition when
// min(m,n) <= 64, randomized subspace iteration (2 power passes,
// oversampling 8) above that; deterministic for a fixed input and seed.
// Sign convention: the largest-magnitude entry of each u column is positive.
TruncatedSvd truncated_svd(const DenseMatrix& a, std::size_t p,
                           std::uint64_t seed = kDefaultSvdSeed);

// ||x - w*h||_F / ||x||_F. Throws ZeroMatrix when ||x||_F = 0.
double relative_error(const DenseMatrix& x, const DenseMatrix& w,
                      const DenseMatrix& h);

// Per-column Euclidean norms.
std::vector<double> column_2norms(const DenseMatrix& a);

// Elementwise average of the selected columns. Throws EmptySelection.
std::vector<double> mean_of_columns(const DenseMatrix& a,
                                    const std::vector<std::size_t>& idx);

}  // namespace nmf
