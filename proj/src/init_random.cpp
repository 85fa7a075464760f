#include "nmf/init_random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "nmf/errors.hpp"
#include "nmf/linalg.hpp"
#include "nmf/rng.hpp"

namespace nmf {
namespace {

void check_rank(std::size_t m, std::size_t n, std::size_t r) {
  if (r == 0 || r > std::min(m, n)) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(m) + "x" + std::to_string(n) + " data");
  }
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = rng.uniform01();
  }
  return out;
}

// Mean-of-sampled-columns W shared by the acol/c schemes. `candidates` maps
// sample slots to data column indices.
DenseMatrix averaged_columns(const DenseMatrix& x,
                             const std::vector<std::size_t>& candidates,
                             std::size_t r, std::size_t q, Rng& rng) {
  DenseMatrix w(x.rows(), r);
  for (std::size_t c = 0; c < r; ++c) {
    const auto picks = rng.sample_without_replacement(candidates.size(), q);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      double acc = 0.0;
      for (std::size_t p : picks) acc += x(i, candidates[p]);
      w(i, c) = acc / static_cast<double>(q);
    }
  }
  return w;
}

}  // namespace

FactorPair init_random(std::size_t m, std::size_t n, std::size_t r,
                       std::uint64_t seed) {
  check_rank(m, n, r);
  Rng rng(seed);
  FactorPair pair;
  pair.w = random_matrix(m, r, rng);
  pair.h = random_matrix(r, n, rng);
  pair.rank = r;
  pair.origin = "random";
  pair.seed = seed;
  return pair;
}

FactorPair init_random_acol(const DenseMatrix& x, std::size_t r, std::size_t q,
                            std::uint64_t seed) {
  check_rank(x.rows(), x.cols(), r);
  if (q == 0 || q > x.cols()) {
    throw BadQ("sample size " + std::to_string(q) + " out of range [1, " +
               std::to_string(x.cols()) + "]");
  }
  Rng rng(seed);
  std::vector<std::size_t> all(x.cols());
  std::iota(all.begin(), all.end(), std::size_t{0});
  FactorPair pair;
  pair.w = averaged_columns(x, all, r, q, rng);
  pair.h = random_matrix(r, x.cols(), rng);
  pair.rank = r;
  pair.origin = "random-acol";
  pair.seed = seed;
  return pair;
}

FactorPair init_random_c(const DenseMatrix& x, std::size_t r, std::size_t q,
                         std::size_t pool, std::uint64_t seed) {
  check_rank(x.rows(), x.cols(), r);
  if (q == 0 || q > pool || pool > x.cols()) {
    throw BadQ("need 1 <= q <= pool <= n, got q=" + std::to_string(q) +
               " pool=" + std::to_string(pool) +
               " n=" + std::to_string(x.cols()));
  }
  const std::vector<double> norms = column_2norms(x);
  std::vector<std::size_t> order(x.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (norms[a] != norms[b]) return norms[a] > norms[b];
                     return a < b;
                   });
  std::vector<std::size_t> candidates(order.begin(),
                                      order.begin() + static_cast<long>(pool));
  // Present the pool in index order so pool = n reproduces the unrestricted
  // scheme draw for draw.
  std::sort(candidates.begin(), candidates.end());

  Rng rng(seed);
  FactorPair pair;
  pair.w = averaged_columns(x, candidates, r, q, rng);
  pair.h = random_matrix(r, x.cols(), rng);
  pair.rank = r;
  pair.origin = "random-c";
  pair.seed = seed;
  return pair;
}

FactorPair init_cooccurrence(const DenseMatrix& x, std::size_t r,
                             std::uint64_t seed) {
  check_rank(x.rows(), x.cols(), r);
  const std::size_t m = x.rows();
  const DenseMatrix c = matmul_nt(x, x);  // x * x^T, m x m

  std::vector<std::size_t> density(m, 0);
  std::vector<double> norms(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = c(i, j);
      if (std::fabs(v) > 1e-12) ++density[j];
      acc += v * v;
    }
    norms[j] = std::sqrt(acc);
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (density[a] != density[b]) return density[a] > density[b];
                     if (norms[a] != norms[b]) return norms[a] > norms[b];
                     return a < b;
                   });
  std::size_t pool = std::max(2 * r, (m + 4) / 5);
  pool = std::clamp(pool, r, m);

  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(pool, r);
  FactorPair pair;
  pair.w = DenseMatrix(m, r);
  for (std::size_t col = 0; col < r; ++col) {
    const std::size_t src = order[picks[col]];
    for (std::size_t i = 0; i < m; ++i) pair.w(i, col) = c(i, src);
  }
  pair.h = random_matrix(r, x.cols(), rng);
  pair.rank = r;
  pair.origin = "cooc";
  pair.seed = seed;
  return pair;
}

void GaborBank::validate() const {
  if (scales == 0 || orientations == 0) {
    throw DomainError("wavelet bank needs at least one scale and orientation");
  }
  if (window == 0 || window % 2 == 0) {
    throw DomainError("wavelet window must be odd, got " +
                      std::to_string(window));
  }
  if (sigma <= 0.0 || k_max <= 0.0 || spacing <= 0.0) {
    throw DomainError("wavelet bank parameters must be positive");
  }
}

GaborKernel gabor_kernel(const GaborBank& bank, std::size_t mu,
                         std::size_t v) {
  bank.validate();
  if (mu >= bank.orientations || v >= bank.scales) {
    throw DomainError("kernel index (mu=" + std::to_string(mu) +
                      ", v=" + std::to_string(v) + ") outside bank");
  }
  constexpr double kPi = 3.14159265358979323846;
  const double k_norm = bank.k_max / std::pow(bank.spacing, static_cast<double>(v));
  const double phi = kPi * static_cast<double>(mu) /
                     static_cast<double>(bank.orientations);
  const double kx = k_norm * std::cos(phi);
  const double ky = k_norm * std::sin(phi);
  const double k2 = k_norm * k_norm;
  const double sigma2 = bank.sigma * bank.sigma;
  const double dc = std::exp(-sigma2 / 2.0);

  GaborKernel kernel;
  kernel.window = bank.window;
  kernel.values.resize(bank.window * bank.window);
  const long half = static_cast<long>(bank.window / 2);
  for (long zr = -half; zr <= half; ++zr) {
    for (long zc = -half; zc <= half; ++zc) {
      const double z2 = static_cast<double>(zr * zr + zc * zc);
      const double envelope = (k2 / sigma2) * std::exp(-k2 * z2 / (2.0 * sigma2));
      const double phase = kx * static_cast<double>(zc) +
                           ky * static_cast<double>(zr);
      const std::complex<double> carrier(std::cos(phase) - dc, -std::sin(phase));
      kernel.values[static_cast<std::size_t>(zr + half) * bank.window +
                    static_cast<std::size_t>(zc + half)] = envelope * carrier;
    }
  }
  return kernel;
}

std::vector<std::complex<double>> gabor_convolve(const DenseMatrix& image,
                                                 const GaborKernel& kernel) {
  const long rows = static_cast<long>(image.rows());
  const long cols = static_cast<long>(image.cols());
  const long half = static_cast<long>(kernel.window / 2);
  std::vector<std::complex<double>> out(image.rows() * image.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      std::complex<double> acc(0.0, 0.0);
      const long r0 = std::max(-half, -r);
      const long r1 = std::min(half, rows - 1 - r);
      const long c0 = std::max(-half, -c);
      const long c1 = std::min(half, cols - 1 - c);
      for (long dr = r0; dr <= r1; ++dr) {
        for (long dc = c0; dc <= c1; ++dc) {
          acc += image(static_cast<std::size_t>(r + dr),
                       static_cast<std::size_t>(c + dc)) *
                 kernel.at(static_cast<std::size_t>(dr + half),
                           static_cast<std::size_t>(dc + half));
        }
      }
      out[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
          static_cast<std::size_t>(c)] = acc;
    }
  }
  return out;
}

FactorPair init_gabor(const DenseMatrix& x, std::size_t image_rows,
                      std::size_t image_cols, std::size_t r,
                      const GaborBank& bank, std::uint64_t seed) {
  check_rank(x.rows(), x.cols(), r);
  bank.validate();
  if (image_rows * image_cols != x.rows()) {
    throw NotAnImageDataset("rows " + std::to_string(x.rows()) +
                            " do not match image shape " +
                            std::to_string(image_rows) + "x" +
                            std::to_string(image_cols));
  }
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(x.cols(), r);
  FactorPair pair;
  pair.w = DenseMatrix(x.rows(), r);
  for (std::size_t col = 0; col < r; ++col) {
    const std::size_t src = picks[col];
    // Columns store images column-major: pixel (pr, pc) at pc*rows + pr.
    DenseMatrix image(image_rows, image_cols);
    for (std::size_t pc = 0; pc < image_cols; ++pc) {
      for (std::size_t pr = 0; pr < image_rows; ++pr) {
        image(pr, pc) = x(pc * image_rows + pr, src);
      }
    }

    double lo = image(0, 0);
    double hi = image(0, 0);
    for (std::size_t i = 0; i < image_rows; ++i) {
      for (std::size_t j = 0; j < image_cols; ++j) {
        lo = std::min(lo, image(i, j));
        hi = std::max(hi, image(i, j));
      }
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi))) {
      // Constant image: the kernel has no DC response, so the magnitude
      // field is (near) zero; keep the raw column instead.
      for (std::size_t i = 0; i < x.rows(); ++i) pair.w(i, col) = x(i, src);
      continue;
    }

    const std::size_t mu = rng.index(bank.orientations);
    const std::size_t v = rng.index(bank.scales);
    const auto field = gabor_convolve(image, gabor_kernel(bank, mu, v));
    double peak = 0.0;
    for (const auto& z : field) peak = std::max(peak, std::abs(z));
    if (peak <= 0.0) {
      for (std::size_t i = 0; i < x.rows(); ++i) pair.w(i, col) = x(i, src);
      continue;
    }
    for (std::size_t pc = 0; pc < image_cols; ++pc) {
      for (std::size_t pr = 0; pr < image_rows; ++pr) {
        pair.w(pc * image_rows + pr, col) =
            std::abs(field[pr * image_cols + pc]) / peak;
      }
    }
  }
  pair.h = random_matrix(r, x.cols(), rng);
  pair.rank = r;
  pair.origin = "gabor";
  pair.seed = seed;
  return pair;
}

}  // namespace nmf
