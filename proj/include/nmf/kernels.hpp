#pragma once

#include "nmf/matrix.hpp"

namespace nmf {

// OpenMP-parallel dense kernels. Work is partitioned by output row (products)
// or by fixed-size block (reductions) so results are bitwise identical for
// any thread count; see serial_ref.hpp for the plain reference versions.

// c = a * b
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// c = a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

// c = a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

// sqrt(sum a_ij^2)
double frobenius_norm(const DenseMatrix& a);

// ||a - b||_F; shapes must agree.
double frobenius_diff_norm(const DenseMatrix& a, const DenseMatrix& b);

// sum_ij a_ij * b_ij; shapes must agree.
double dot_all(const DenseMatrix& a, const DenseMatrix& b);

namespace serial {
// Scalar-loop reference implementations used by tests and kernel_bench.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);
double frobenius_diff_norm(const DenseMatrix& a, const DenseMatrix& b);
double dot_all(const DenseMatrix& a, const DenseMatrix& b);
}  // namespace serial

}  // namespace nmf
