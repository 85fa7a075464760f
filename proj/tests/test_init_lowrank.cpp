#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nmf/errors.hpp"
#include "nmf/init_lowrank.hpp"
#include "nmf/init_random.hpp"
#include "oracles.hpp"

namespace {

double rel_error(const nmf::DenseMatrix& x, const nmf::FactorPair& p) {
  return oracle::frobenius_diff(x, oracle::matmul(p.w, p.h)) /
         oracle::frobenius(x);
}

nmf::DenseMatrix rank1_outer(const std::vector<double>& u,
                             const std::vector<double>& v) {
  nmf::DenseMatrix x(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) x(i, j) = u[i] * v[j];
  }
  return x;
}

}  // namespace

TEST_CASE("init_svd_abs is exact on rank-one and diagonal data") {
  const nmf::DenseMatrix x = rank1_outer({1.0, 2.0, 0.5}, {3.0, 1.0, 2.0, 4.0});
  const auto pair = nmf::init_svd_abs(x, 1);
  CHECK(rel_error(x, pair) <= 1e-8);
  CHECK(pair.w.all_nonnegative());
  CHECK(pair.h.all_nonnegative());

  nmf::DenseMatrix diag(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  const auto d = nmf::init_svd_abs(diag, 2);
  CHECK(rel_error(diag, d) <= 1e-8);

  nmf::Rng rng(81);
  const nmf::DenseMatrix y = oracle::random_matrix(7, 6, rng);
  const auto p1 = nmf::init_svd_abs(y, 3);
  const auto p2 = nmf::init_svd_abs(y, 3);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t c = 0; c < 3; ++c) CHECK(p1.w(i, c) == p2.w(i, c));
  }
  CHECK_THROWS_AS((void)nmf::init_svd_abs(y, 0), nmf::BadRank);
}

TEST_CASE("svd-abs quality on random data across ranks") {
  // Clipping larger bases does not have to help; record the errors so the
  // behaviour stays observable without pinning an order.
  nmf::Rng rng(82);
  nmf::DenseMatrix x(12, 10);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 10; ++j) x(i, j) = rng.uniform01();
  }
  for (std::size_t r : {std::size_t{2}, std::size_t{4}, std::size_t{8}}) {
    const double err = rel_error(x, nmf::init_svd_abs(x, r));
    MESSAGE("svd-abs rank ", r, " relative error ", err);
    CHECK(err < 1.0);
  }
}

TEST_CASE("select_rank_90 distinguishes value and energy shares") {
  const std::vector<double> spectrum{3.0, 1.0, 1.0};
  CHECK(nmf::select_rank_90(spectrum) == 3);  // 4/5 < 0.9, needs all three
  CHECK(nmf::select_rank_90(spectrum, 0.90, true) == 2);  // 10/11 >= 0.9
  CHECK(nmf::select_rank_90({5.0, 0.0, 0.0}) == 1);
  CHECK(nmf::select_rank_90({1.0, 1.0}, 1.0) == 2);
  CHECK_THROWS_AS((void)nmf::select_rank_90({0.0, 0.0}), nmf::ZeroSpectrum);
  CHECK_THROWS_AS((void)nmf::select_rank_90({}), nmf::ZeroSpectrum);
  CHECK_THROWS_AS((void)nmf::select_rank_90({1.0}, 0.0), nmf::DomainError);
  CHECK_THROWS_AS((void)nmf::select_rank_90({1.0}, 1.5), nmf::DomainError);
}

TEST_CASE("init_nndsvd is exact on rank-one data and keeps split zeros") {
  const nmf::DenseMatrix x = rank1_outer({2.0, 1.0, 3.0}, {1.0, 4.0, 2.0});
  CHECK(rel_error(x, nmf::init_nndsvd(x, 1)) <= 1e-8);

  nmf::DenseMatrix diag(2, 2);
  diag(0, 0) = 3.0;
  diag(1, 1) = 1.0;
  const auto d = nmf::init_nndsvd(diag, 2);
  CHECK(rel_error(diag, d) <= 1e-8);

  // Splitting signed singular vectors zeroes one sign half; those entries
  // must remain exactly zero rather than being epsilon-filled.
  nmf::Rng rng(83);
  const nmf::DenseMatrix y = oracle::random_matrix(8, 7, rng);
  const auto pair = nmf::init_nndsvd(y, 4);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < pair.w.rows(); ++i) {
    for (std::size_t c = 0; c < pair.w.cols(); ++c) {
      if (pair.w(i, c) == 0.0) ++zeros;
    }
  }
  CHECK(zeros > 0);
  CHECK(pair.w.all_nonnegative());
  CHECK(pair.h.all_nonnegative());
}

TEST_CASE("lrc_factors give the best rank-p approximation in split form") {
  nmf::Rng rng(84);
  const nmf::DenseMatrix x = oracle::random_matrix(9, 7, rng);
  const std::size_t r = 4;
  const std::size_t p = nmf::lrc_truncation_rank(r);
  CHECK(p == 3);
  const nmf::LrcFactors lrc = nmf::lrc_factors(x, r);
  CHECK(lrc.y.cols() == p);
  CHECK(lrc.z.rows() == p);

  const nmf::DenseMatrix yz = oracle::matmul(lrc.y, lrc.z);
  const auto sigma = oracle::singular_values(x);
  double tail = 0.0;
  for (std::size_t i = p; i < sigma.size(); ++i) tail += sigma[i] * sigma[i];
  CHECK(oracle::frobenius_diff(x, yz) ==
        doctest::Approx(std::sqrt(tail)).epsilon(1e-8));
  CHECK_THROWS_AS((void)nmf::lrc_factors(x, 1), nmf::BadRank);

  static_assert(nmf::lrc_truncation_rank(2) == 2);
  static_assert(nmf::lrc_truncation_rank(5) == 3);
  static_assert(nmf::lrc_truncation_rank(8) == 5);
}

TEST_CASE("nnsvd_lrc_base pairs complementary sign supports") {
  nmf::Rng rng(85);
  const nmf::DenseMatrix x = oracle::random_matrix(10, 8, rng);
  const std::size_t r = 5;
  const auto base = nmf::nnsvd_lrc_base(x, r);
  const nmf::LrcFactors lrc = nmf::lrc_factors(x, r);

  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(base.w(i, 0) == doctest::Approx(std::fabs(lrc.y(i, 0))));
  }
  for (std::size_t c = 1; c < r; ++c) {
    const std::size_t src = (c + 1) / 2;
    const bool positive = (c % 2) == 1;
    for (std::size_t i = 0; i < 10; ++i) {
      const double y = lrc.y(i, src);
      const double want = positive ? std::max(y, 0.0) : std::max(-y, 0.0);
      CHECK(base.w(i, c) == doctest::Approx(want));
    }
  }
  // Columns fed by the same source never share a support entry.
  for (std::size_t c = 1; c + 1 < r; c += 2) {
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(base.w(i, c) * base.w(i, c + 1) == 0.0);
    }
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(base.h(c, j) * base.h(c + 1, j) == 0.0);
    }
  }
}

TEST_CASE("refined low-rank-corrected factors compete with clipped bases") {
  int no_worse = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    nmf::Rng rng(860 + seed);
    const nmf::DenseMatrix x = oracle::random_lowrank(10, 8, 2, rng);
    const double lrc = rel_error(x, nmf::init_nnsvd_lrc(x, 4));
    const double abs = rel_error(x, nmf::init_svd_abs(x, 4));
    if (lrc <= abs + 1e-9) ++no_worse;
  }
  CHECK(no_worse >= 7);
}

TEST_CASE("fit_pca matches the two-point example and the oracle spectrum") {
  nmf::DenseMatrix two(2, 2);
  two(0, 1) = 2.0;  // columns (0,0) and (2,0)
  const nmf::PcaModel model = nmf::fit_pca(two, 1);
  REQUIRE(model.mean.size() == 2);
  CHECK(model.mean[0] == doctest::Approx(1.0));
  CHECK(model.mean[1] == doctest::Approx(0.0));
  CHECK(model.components(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(model.components(1, 0)) <= 1e-12);
  REQUIRE(model.eigenvalues.size() == 2);
  CHECK(model.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::fabs(model.eigenvalues[1]) <= 1e-12);

  nmf::Rng rng(87);
  const nmf::DenseMatrix x = oracle::random_matrix(6, 9, rng);
  const nmf::PcaModel m2 = nmf::fit_pca(x, 3);
  nmf::DenseMatrix xc(6, 9);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 9; ++j) xc(i, j) = x(i, j) - m2.mean[i];
  }
  const auto sigma = oracle::singular_values(xc);
  REQUIRE(m2.eigenvalues.size() == sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    CHECK(m2.eigenvalues[i] ==
          doctest::Approx(sigma[i] * sigma[i]).epsilon(1e-8));
  }
  // Orthonormal components.
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        dot += m2.components(i, a) * m2.components(i, b);
      }
      CHECK(std::fabs(dot - (a == b ? 1.0 : 0.0)) <= 1e-9);
    }
  }

  nmf::DenseMatrix flat(3, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) flat(i, j) = 0.7;
  }
  CHECK_THROWS_AS((void)nmf::fit_pca(flat, 1), nmf::DegenerateData);
}

TEST_CASE("fit_pca_auto keeps the requested share of the spectrum") {
  // Centered singular values ~ {3, 0.1}: one direction carries > 90 percent.
  nmf::DenseMatrix x(3, 6);
  for (std::size_t j = 0; j < 6; ++j) {
    const double t = static_cast<double>(j) - 2.5;
    x(0, j) = 5.0 + t;
    x(1, j) = 5.0 + t + 0.01 * (j % 2 == 0 ? 1.0 : -1.0);
    x(2, j) = 5.0;
  }
  const nmf::PcaModel narrow = nmf::fit_pca_auto(x, 0.90);
  CHECK(narrow.components.cols() == 1);
  const nmf::PcaModel wide = nmf::fit_pca_auto(x, 0.9999);
  CHECK(wide.components.cols() >= 2);
}

TEST_CASE("init_npca clips components and projections") {
  nmf::Rng rng(88);
  const nmf::DenseMatrix x = oracle::random_matrix(6, 8, rng);
  const auto pair = nmf::init_npca(x, 2, 5);
  const nmf::PcaModel model = nmf::fit_pca(x, 2);
  nmf::DenseMatrix xc(6, 8);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 8; ++j) xc(i, j) = x(i, j) - model.mean[i];
  }
  const nmf::DenseMatrix proj =
      oracle::matmul(oracle::transpose(model.components), xc);
  for (std::size_t c = 0; c < 2; ++c) {
    double col_sum = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(pair.w(i, c) ==
            doctest::Approx(std::max(model.components(i, c), 0.0)));
      col_sum += pair.w(i, c);
    }
    CHECK(col_sum > 0.0);  // sign convention guarantees a positive entry
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(pair.h(c, j) == doctest::Approx(std::max(proj(c, j), 0.0)));
    }
  }
}

TEST_CASE("whitening derived from fit_pca has identity covariance") {
  nmf::Rng rng(89);
  const nmf::DenseMatrix x = oracle::random_matrix(5, 40, rng);
  const std::size_t r = 3;
  const nmf::PcaModel model = nmf::fit_pca(x, r);
  const std::size_t n = x.cols();
  nmf::DenseMatrix y(r, n);
  for (std::size_t c = 0; c < r; ++c) {
    const double d = std::sqrt(model.eigenvalues[c] / static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < 5; ++i) {
        acc += model.components(i, c) * (x(i, j) - model.mean[i]);
      }
      y(c, j) = acc / d;
    }
  }
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = 0; b < r; ++b) {
      double cov = 0.0;
      for (std::size_t j = 0; j < n; ++j) cov += y(a, j) * y(b, j);
      cov /= static_cast<double>(n);
      CHECK(std::fabs(cov - (a == b ? 1.0 : 0.0)) <= 1e-6);
    }
  }
}

TEST_CASE("init_nica separates sparse non-negative mixtures") {
  auto make_mixture = [](std::uint64_t seed) {
    nmf::Rng rng(seed);
    const std::size_t m = 6, n = 60, r = 2;
    nmf::DenseMatrix s(r, n);
    for (std::size_t j = 0; j < n; ++j) {
      // Sparse heavy-tailed sources: mostly near zero, occasional spikes.
      for (std::size_t c = 0; c < r; ++c) {
        const double u = rng.uniform01();
        s(c, j) = u > 0.8 ? 4.0 * rng.uniform01() : 0.05 * rng.uniform01();
      }
    }
    nmf::DenseMatrix a(m, r);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < r; ++c) a(i, c) = rng.uniform01();
    }
    return oracle::matmul(a, s);
  };

  int wins = 0;
  for (std::uint64_t t = 0; t < 10; ++t) {
    const nmf::DenseMatrix x = make_mixture(900 + t);
    const double nica = rel_error(x, nmf::init_nica(x, 2, t));
    double random_mean = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto rnd = nmf::init_random(x.rows(), x.cols(), 2, 70 + 5 * t + s);
      random_mean += rel_error(x, rnd);
    }
    random_mean /= 5.0;
    if (nica <= random_mean) ++wins;
  }
  CHECK(wins >= 8);

  const nmf::DenseMatrix x = make_mixture(950);
  const auto p1 = nmf::init_nica(x, 2, 3);
  const auto p2 = nmf::init_nica(x, 2, 3);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t c = 0; c < 2; ++c) CHECK(p1.w(i, c) == p2.w(i, c));
  }
  CHECK(p1.w.all_nonnegative());
  CHECK(p1.h.all_nonnegative());

  // Rank-one data cannot be whitened to two dimensions.
  const nmf::DenseMatrix thin =
      rank1_outer({1.0, 2.0, 3.0}, {1.0, 0.5, 2.0, 1.5});
  CHECK_THROWS_AS((void)nmf::init_nica(thin, 2, 0), nmf::DegenerateData);
}
