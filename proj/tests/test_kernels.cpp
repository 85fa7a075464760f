#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <omp.h>

#include "doctest.h"
#include "nmf/kernels.hpp"
#include "oracles.hpp"

namespace {

nmf::DenseMatrix signed_random(std::size_t rows, std::size_t cols,
                               nmf::Rng& rng) {
  nmf::DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = rng.uniform(-1.0, 1.0);
  }
  return out;
}

}  // namespace

TEST_CASE("products agree with the scalar oracle") {
  nmf::Rng rng(21);
  for (auto [m, k, n] : {std::array<std::size_t, 3>{3, 4, 5},
                         {17, 9, 23},
                         {40, 1, 7},
                         {1, 30, 1}}) {
    const nmf::DenseMatrix a = signed_random(m, k, rng);
    const nmf::DenseMatrix b = signed_random(k, n, rng);
    const nmf::DenseMatrix want = oracle::matmul(a, b);

    const nmf::DenseMatrix got = nmf::matmul(a, b);
    const nmf::DenseMatrix got_tn = nmf::matmul_tn(a.transposed(), b);
    const nmf::DenseMatrix got_nt = nmf::matmul_nt(a, b.transposed());
    REQUIRE(got.same_shape(want));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(got(i, j) == doctest::Approx(want(i, j)).epsilon(1e-12));
        CHECK(got_tn(i, j) == doctest::Approx(want(i, j)).epsilon(1e-12));
        CHECK(got_nt(i, j) == doctest::Approx(want(i, j)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("parallel products are bitwise equal to the serial reference") {
  nmf::Rng rng(22);
  omp_set_num_threads(3);  // force a real team even on one core
  for (auto [m, k, n] : {std::array<std::size_t, 3>{8, 5, 6},    // serial path
                         {16, 7, 9},                             // threshold
                         {33, 12, 29}}) {                        // parallel
    const nmf::DenseMatrix a = signed_random(m, k, rng);
    const nmf::DenseMatrix b = signed_random(k, n, rng);
    CHECK(nmf::matmul(a, b) == nmf::serial::matmul(a, b));
    CHECK(nmf::matmul_tn(a.transposed(), b) ==
          nmf::serial::matmul_tn(a.transposed(), b));
    CHECK(nmf::matmul_nt(a, b.transposed()) ==
          nmf::serial::matmul_nt(a, b.transposed()));
  }
}

TEST_CASE("reductions agree with scalar sums and are thread-count stable") {
  nmf::Rng rng(23);
  const nmf::DenseMatrix a = signed_random(60, 55, rng);
  const nmf::DenseMatrix b = signed_random(60, 55, rng);

  CHECK(nmf::frobenius_norm(a) ==
        doctest::Approx(oracle::frobenius(a)).epsilon(1e-13));
  CHECK(nmf::frobenius_diff_norm(a, b) ==
        doctest::Approx(oracle::frobenius_diff(a, b)).epsilon(1e-13));
  CHECK(nmf::dot_all(a, b) ==
        doctest::Approx(oracle::dot_all(a, b)).epsilon(1e-13));

  // Fixed blocking with a serial combine: the value must not depend on the
  // team size at all.
  omp_set_num_threads(1);
  const double norm1 = nmf::frobenius_norm(a);
  const double dot1 = nmf::dot_all(a, b);
  omp_set_num_threads(4);
  CHECK(nmf::frobenius_norm(a) == norm1);
  CHECK(nmf::dot_all(a, b) == dot1);
  omp_set_num_threads(3);
  CHECK(nmf::frobenius_norm(a) == norm1);

  // The serial reference sums linearly; blocked combines reorder the
  // additions, so agreement is close but not bitwise.
  CHECK(nmf::frobenius_norm(a) ==
        doctest::Approx(nmf::serial::frobenius_norm(a)).epsilon(1e-13));
  CHECK(nmf::dot_all(a, b) ==
        doctest::Approx(nmf::serial::dot_all(a, b)).epsilon(1e-13));
}

TEST_CASE("product shape mismatches are rejected") {
  const nmf::DenseMatrix a(3, 4, 1.0);
  const nmf::DenseMatrix b(5, 2, 1.0);
  CHECK_THROWS_AS((void)nmf::matmul(a, b), nmf::Error);
  CHECK_THROWS_AS((void)nmf::matmul_tn(a, b), nmf::Error);
  CHECK_THROWS_AS((void)nmf::matmul_nt(a, b), nmf::Error);
  CHECK_THROWS_AS((void)nmf::frobenius_diff_norm(a, b), nmf::Error);
  CHECK_THROWS_AS((void)nmf::dot_all(a, b), nmf::Error);
}
