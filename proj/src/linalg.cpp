#include "nmf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmf/errors.hpp"
#include "nmf/rng.hpp"

namespace nmf {

namespace {

double off_diagonal_norm(const DenseMatrix& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (i != j) acc += s(i, j) * s(i, j);
  return std::sqrt(acc);
}

// Modified Gram-Schmidt on the columns of q, in place. Columns whose norm
// collapses are replaced by unit basis vectors orthogonalized against the
// columns already accepted (rank completion for zero singular values).
void orthonormalize_columns(DenseMatrix& q) {
  const std::size_t m = q.rows(), k = q.cols();
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t prev = 0; prev < j; ++prev) {
      double proj = 0.0;
      for (std::size_t i = 0; i < m; ++i) proj += q(i, prev) * q(i, j);
      for (std::size_t i = 0; i < m; ++i) q(i, j) -= proj * q(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    if (norm > 1e-13) {
      for (std::size_t i = 0; i < m; ++i) q(i, j) /= norm;
      continue;
    }
    // Completion: try basis vectors until one survives orthogonalization.
    for (std::size_t basis = 0; basis < m; ++basis) {
      for (std::size_t i = 0; i < m; ++i) q(i, j) = i == basis ? 1.0 : 0.0;
      for (std::size_t prev = 0; prev < j; ++prev) {
        double proj = 0.0;
        for (std::size_t i = 0; i < m; ++i) proj += q(i, prev) * q(i, j);
        for (std::size_t i = 0; i < m; ++i) q(i, j) -= proj * q(i, prev);
      }
      norm = 0.0;
      for (std::size_t i = 0; i < m; ++i) norm += q(i, j) * q(i, j);
      norm = std::sqrt(norm);
      if (norm > 0.5) break;  // basis vector mostly outside the span
    }
    for (std::size_t i = 0; i < m; ++i) q(i, j) /= norm;
  }
}

// Jacobi SVD of a with min(m,n) small: eigendecompose the Gram matrix of the
// smaller side, recover the other side's vectors through a.
TruncatedSvd gram_svd(const DenseMatrix& a, std::size_t p) {
  const std::size_t m = a.rows(), n = a.cols();
  const bool tall = n <= m;  // eigendecompose A^T A when columns are fewer
  const DenseMatrix gram = tall ? matmul_tn(a, a) : matmul_nt(a, a);
  std::vector<double> lambda;
  DenseMatrix evec;
  jacobi_eigh(gram, lambda, evec);

  const std::size_t small_dim = gram.rows();
  TruncatedSvd out;
  out.sigma.resize(p);
  out.u = DenseMatrix(m, p);
  out.v = DenseMatrix(n, p);
  DenseMatrix& small_side = tall ? out.v : out.u;
  DenseMatrix& large_side = tall ? out.u : out.v;
  const std::size_t large_dim = tall ? m : n;

  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < small_dim; ++i) small_side(i, j) = evec(i, j);

  const double sigma1 = std::sqrt(std::max(lambda.empty() ? 0.0 : lambda[0], 0.0));
  for (std::size_t j = 0; j < p; ++j) {
    // Map through a: u = A v / sigma (or v = A^T u / sigma).
    std::vector<double> mapped(large_dim, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (tall)
          mapped[i] += a(i, l) * small_side(l, j);
        else
          mapped[l] += a(i, l) * small_side(i, j);
      }
    double norm = 0.0;
    for (double v : mapped) norm += v * v;
    norm = std::sqrt(norm);
    out.sigma[j] = norm;
    if (norm > sigma1 * 1e-13 && norm > 0.0) {
      for (std::size_t i = 0; i < large_dim; ++i)
        large_side(i, j) = mapped[i] / norm;
    } else {
      out.sigma[j] = std::sqrt(std::max(lambda[j], 0.0));
      for (std::size_t i = 0; i < large_dim; ++i) large_side(i, j) = 0.0;
      // Column filled by the completion pass inside orthonormalize_columns.
    }
  }
  orthonormalize_columns(large_side);
  return out;
}

TruncatedSvd randomized_svd(const DenseMatrix& a, std::size_t p,
                            std::uint64_t seed) {
  const std::size_t m = a.rows(), n = a.cols();
  const std::size_t l = std::min(p + 8, std::min(m, n));
  Rng rng(seed);
  DenseMatrix omega(n, l);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < l; ++j) omega(i, j) = rng.normal();

  DenseMatrix q = matmul(a, omega);  // m x l
  orthonormalize_columns(q);
  for (int pass = 0; pass < 2; ++pass) {
    DenseMatrix z = matmul_tn(a, q);  // n x l
    orthonormalize_columns(z);
    q = matmul(a, z);  // m x l
    orthonormalize_columns(q);
  }
  const DenseMatrix b = matmul_tn(q, a);  // l x n, a ~= q * b
  TruncatedSvd small = gram_svd(b, p);
  TruncatedSvd out;
  out.sigma = std::move(small.sigma);
  out.u = matmul(q, small.u);
  out.v = std::move(small.v);
  orthonormalize_columns(out.u);
  return out;
}

void fix_signs(TruncatedSvd& svd) {
  for (std::size_t j = 0; j < svd.sigma.size(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < svd.u.rows(); ++i) {
      const double mag = std::fabs(svd.u(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (svd.u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < svd.u.rows(); ++i) svd.u(i, j) = -svd.u(i, j);
      for (std::size_t i = 0; i < svd.v.rows(); ++i) svd.v(i, j) = -svd.v(i, j);
    }
  }
}

void sort_by_sigma(TruncatedSvd& svd) {
  const std::size_t p = svd.sigma.size();
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return svd.sigma[a] > svd.sigma[b];
  });
  TruncatedSvd sorted;
  sorted.sigma.resize(p);
  sorted.u = DenseMatrix(svd.u.rows(), p);
  sorted.v = DenseMatrix(svd.v.rows(), p);
  for (std::size_t j = 0; j < p; ++j) {
    sorted.sigma[j] = svd.sigma[order[j]];
    for (std::size_t i = 0; i < svd.u.rows(); ++i)
      sorted.u(i, j) = svd.u(i, order[j]);
    for (std::size_t i = 0; i < svd.v.rows(); ++i)
      sorted.v(i, j) = svd.v(i, order[j]);
  }
  svd = std::move(sorted);
}

}  // namespace

void jacobi_eigh(const DenseMatrix& s, std::vector<double>& values,
                 DenseMatrix& vectors) {
  if (s.rows() != s.cols()) throw Error("jacobi_eigh: matrix not square");
  const std::size_t n = s.rows();
  DenseMatrix a = s;
  vectors = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) vectors(i, i) = 1.0;

  const double scale = frobenius_norm(s);
  const double tol = scale > 0.0 ? scale * 1e-15 : 0.0;
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_diagonal_norm(a) > tol && sweep < kMaxSweeps) {
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - sn * aiq;
          a(i, q) = sn * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - sn * aqi;
          a(q, i) = sn * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = vectors(i, p), viq = vectors(i, q);
          vectors(i, p) = c * vip - sn * viq;
          vectors(i, q) = sn * vip + c * viq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) > tol)
    throw ConvergenceFailure("jacobi_eigh: sweep cap exceeded");

  values.resize(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });
  std::vector<double> sorted_values(n);
  DenseMatrix sorted_vectors(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    sorted_values[j] = values[order[j]];
    for (std::size_t i = 0; i < n; ++i)
      sorted_vectors(i, j) = vectors(i, order[j]);
  }
  values = std::move(sorted_values);
  vectors = std::move(sorted_vectors);
}

TruncatedSvd truncated_svd(const DenseMatrix& a, std::size_t p,
                           std::uint64_t seed) {
  const std::size_t small_dim = std::min(a.rows(), a.cols());
  if (p < 1 || p > small_dim)
    throw BadRank("truncated_svd: p must satisfy 1 <= p <= min(m,n)");
  TruncatedSvd out =
      small_dim <= 64 ? gram_svd(a, p) : randomized_svd(a, p, seed);
  sort_by_sigma(out);
  fix_signs(out);
  return out;
}

double relative_error(const DenseMatrix& x, const DenseMatrix& w,
                      const DenseMatrix& h) {
  const double denom = frobenius_norm(x);
  if (denom == 0.0) throw ZeroMatrix("relative_error: ||x||_F = 0");
  return frobenius_diff_norm(x, matmul(w, h)) / denom;
}

std::vector<double> column_2norms(const DenseMatrix& a) {
  std::vector<double> norms(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) norms[j] += a(i, j) * a(i, j);
  for (double& v : norms) v = std::sqrt(v);
  return norms;
}

std::vector<double> mean_of_columns(const DenseMatrix& a,
                                    const std::vector<std::size_t>& idx) {
  if (idx.empty()) throw EmptySelection("mean_of_columns: empty index list");
  std::vector<double> mean(a.rows(), 0.0);
  for (std::size_t j : idx) {
    if (j >= a.cols()) throw Error("mean_of_columns: index out of range");
    for (std::size_t i = 0; i < a.rows(); ++i) mean[i] += a(i, j);
  }
  for (double& v : mean) v /= static_cast<double>(idx.size());
  return mean;
}

}  // namespace nmf
