#include "nmf/kernels.hpp"

#include <cmath>
#include <cstdint>

namespace nmf {

namespace {
// Reduction block size. Fixed independently of thread count so the serial
// combine below yields the same floating-point result for any schedule.
constexpr std::size_t kBlock = 1024;

template <typename BlockSum>
double blocked_sum(std::size_t n, BlockSum&& block_sum) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks, 0.0);
#pragma omp parallel for schedule(static) if (nblocks > 4)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    partial[static_cast<std::size_t>(b)] = block_sum(lo, hi);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}
}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matmul: inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#pragma omp parallel for schedule(static) if (m >= 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
    double* crow = pc + i * static_cast<std::int64_t>(n);
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = pa[static_cast<std::size_t>(i) * k + l];
      const double* brow = pb + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += ail * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw Error("matmul_tn: inner dimensions differ");
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#pragma omp parallel for schedule(static) if (m >= 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
    double* crow = pc + i * static_cast<std::int64_t>(n);
    for (std::size_t l = 0; l < k; ++l) {
      const double ali = pa[l * m + static_cast<std::size_t>(i)];
      const double* brow = pb + l * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += ali * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw Error("matmul_nt: inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  DenseMatrix c(m, n);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
#pragma omp parallel for schedule(static) if (m >= 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(m); ++i) {
    const double* arow = pa + i * static_cast<std::int64_t>(k);
    double* crow = pc + i * static_cast<std::int64_t>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = pb + j * k;
      double acc = 0.0;
      for (std::size_t l = 0; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] = acc;
    }
  }
  return c;
}

double frobenius_norm(const DenseMatrix& a) {
  const double* p = a.data();
  return std::sqrt(blocked_sum(a.size(), [p](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += p[i] * p[i];
    return s;
  }));
}

double frobenius_diff_norm(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw Error("frobenius_diff_norm: shape mismatch");
  const double* pa = a.data();
  const double* pb = b.data();
  return std::sqrt(
      blocked_sum(a.size(), [pa, pb](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
          const double d = pa[i] - pb[i];
          s += d * d;
        }
        return s;
      }));
}

double dot_all(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw Error("dot_all: shape mismatch");
  const double* pa = a.data();
  const double* pb = b.data();
  return blocked_sum(a.size(), [pa, pb](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += pa[i] * pb[i];
    return s;
  });
}

namespace serial {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matmul: inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < n; ++j) c(i, j) += a(i, l) * b(l, j);
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw Error("matmul_tn: inner dimensions differ");
  const std::size_t k = a.rows(), m = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < n; ++j) c(i, j) += a(l, i) * b(l, j);
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw Error("matmul_nt: inner dimensions differ");
  const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
  DenseMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < k; ++l) acc += a(i, l) * b(j, l);
      c(i, j) = acc;
    }
  return c;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += p[i] * p[i];
  return std::sqrt(s);
}

double frobenius_diff_norm(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw Error("frobenius_diff_norm: shape mismatch");
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double dot_all(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw Error("dot_all: shape mismatch");
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += pa[i] * pb[i];
  return s;
}

}  // namespace serial
}  // namespace nmf
