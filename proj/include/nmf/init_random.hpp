#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nmf/matrix.hpp"
#include "nmf/solvers.hpp"

namespace nmf {

// W, H entries i.i.d. uniform on (0, 1].
FactorPair init_random(std::size_t m, std::size_t n, std::size_t r,
                       std::uint64_t seed);

// Each W column is the mean of q data columns sampled without replacement;
// H is uniform random.
FactorPair init_random_acol(const DenseMatrix& x, std::size_t r, std::size_t q,
                            std::uint64_t seed);

// Like the column-averaging scheme, but candidates are restricted to the
// `pool` columns of largest 2-norm (ties to the lower index). With
// pool = n the draw sequence matches init_random_acol exactly.
FactorPair init_random_c(const DenseMatrix& x, std::size_t r, std::size_t q,
                         std::size_t pool, std::uint64_t seed);

// W columns drawn from the densest columns of the co-occurrence matrix
// x*x^T (density = count of entries above 1e-12, ties by 2-norm then lower
// index, sampling pool = max(2r, ceil(m/5)) clamped to [r, m]); H random.
FactorPair init_cooccurrence(const DenseMatrix& x, std::size_t r,
                             std::uint64_t seed);

// Wavelet family parameters. k_v = k_max / f^v, phi_mu = pi*mu/orientations.
struct GaborBank {
  std::size_t scales = 5;
  std::size_t orientations = 8;
  double sigma = 2.0 * 3.14159265358979323846;
  double k_max = 3.14159265358979323846 / 2.0;
  double spacing = 1.4142135623730951;  // sqrt 2
  std::size_t window = 31;              // odd patch size

  void validate() const;
};

// Complex-valued kernel evaluated on the window's integer grid.
struct GaborKernel {
  std::size_t window;
  std::vector<std::complex<double>> values;  // row-major window x window

  std::complex<double> at(std::size_t row, std::size_t col) const {
    return values[row * window + col];
  }
};

// psi(z) = (|k|^2/sigma^2) exp(-|k|^2 |z|^2 / (2 sigma^2))
//          * [exp(-i k.z) - exp(-sigma^2/2)]
// on integer offsets z; the subtracted constant removes the DC response.
GaborKernel gabor_kernel(const GaborBank& bank, std::size_t mu, std::size_t v);

// Zero-padded same-size convolution of a rows x cols image with a kernel.
std::vector<std::complex<double>> gabor_convolve(const DenseMatrix& image,
                                                 const GaborKernel& kernel);

// W columns: r dataset images picked at random, each convolved with a
// randomly chosen (mu, v) kernel, magnitude taken, max-normalized. Constant
// images (no contrast for the zero-DC kernel) fall back to the raw column.
// Dataset columns are column-major vectorized rows x cols images; H random.
FactorPair init_gabor(const DenseMatrix& x, std::size_t image_rows,
                      std::size_t image_cols, std::size_t r,
                      const GaborBank& bank, std::uint64_t seed);

}  // namespace nmf
