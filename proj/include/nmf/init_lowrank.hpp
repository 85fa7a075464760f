#pragma once

#include <cstdint>
#include <vector>

#include "nmf/matrix.hpp"
#include "nmf/solvers.hpp"

namespace nmf {

// Retained-share threshold used when choosing a rank from a spectrum and by
// the principal-component initializer.
inline constexpr double kSpectrumShare = 0.90;

// W = |U_r|, H = |diag(sigma) V_r^T|. Deterministic.
FactorPair init_svd_abs(const DenseMatrix& x, std::size_t r);

// Smallest p with sum(sigma_1..p) >= share * sum(sigma). With
// `use_squares` the shares are taken on squared values (energy).
std::size_t select_rank_90(const std::vector<double>& sigma,
                           double share = kSpectrumShare,
                           bool use_squares = false);

// Rank-one terms split into signed parts: the heavier of (u+, v+) and
// (u-, v-) is kept, scaled so the pair reproduces sigma * |part| * |part|.
// Zeros introduced by the splitting stay zero.
FactorPair init_nndsvd(const DenseMatrix& x, std::size_t r);

// Half-rank truncation used by the low-rank-corrected scheme: p = r/2 + 1.
inline constexpr std::size_t lrc_truncation_rank(std::size_t r) {
  return r / 2 + 1;
}

// Square-root-split truncated factors: y = U sqrt(Sigma), z = sqrt(Sigma) V^T
// with y*z the best rank-p approximation.
struct LrcFactors {
  DenseMatrix y;  // m x p
  DenseMatrix z;  // p x n
};

LrcFactors lrc_factors(const DenseMatrix& x, std::size_t r);

// Pre-refinement factor pair: column 0 takes |y_0| / |z_0|; subsequent
// columns alternate the positive and negative parts of y_1, y_2, ... (and
// matching z rows), so paired columns have complementary supports.
FactorPair nnsvd_lrc_base(const DenseMatrix& x, std::size_t r);

// Base pair polished by `refine_steps` multiplicative updates whose data
// products are routed through the rank-p factors (cost O((m+n) p r) per
// step); signed numerators are clamped at zero.
FactorPair init_nnsvd_lrc(const DenseMatrix& x, std::size_t r,
                          std::size_t refine_steps = 20);

// Principal components of the column-centered data. `eigenvalues` holds the
// full scatter spectrum (squared singular values of the centered matrix,
// no 1/(n-1) normalization); `components` the leading r directions.
struct PcaModel {
  std::vector<double> mean;
  DenseMatrix components;  // m x r, orthonormal columns
  std::vector<double> eigenvalues;
};

PcaModel fit_pca(const DenseMatrix& x, std::size_t r);

// Rank chosen as the smallest r whose eigenvalues retain `share` of the
// total. Throws DegenerateData when the centered matrix is (near) zero.
PcaModel fit_pca_auto(const DenseMatrix& x, double share = kSpectrumShare);

// W = max(components, 0), H = max(components^T centered, 0); any all-zero
// W column is replaced by uniform random entries from `seed`.
FactorPair init_npca(const DenseMatrix& x, std::size_t r, std::uint64_t seed);

// Whiten the centered data to r dimensions, run symmetric fixed-point ICA
// (log-cosh contrast), re-express the mixing matrix and sources in the
// original coordinates, and use their magnitudes with a least-squares scale
// match against the data. Deterministic per seed.
FactorPair init_nica(const DenseMatrix& x, std::size_t r, std::uint64_t seed);

}  // namespace nmf
