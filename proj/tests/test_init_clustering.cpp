#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "nmf/errors.hpp"
#include "nmf/init_clustering.hpp"
#include "oracles.hpp"

namespace {

// Two well-separated blobs of non-negative columns around distinct anchors.
nmf::DenseMatrix two_blobs(std::size_t m, std::size_t per_blob,
                           std::uint64_t seed) {
  nmf::Rng rng(seed);
  nmf::DenseMatrix x(m, 2 * per_blob);
  for (std::size_t j = 0; j < 2 * per_blob; ++j) {
    const double base = j < per_blob ? 1.0 : 9.0;
    for (std::size_t i = 0; i < m; ++i) {
      x(i, j) = base + 0.2 * rng.uniform01();
    }
  }
  return x;
}

double dist2_to(const nmf::DenseMatrix& x, std::size_t j,
                const nmf::DenseMatrix& c, std::size_t k) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double d = x(i, j) - c(i, k);
    acc += d * d;
  }
  return acc;
}

}  // namespace

TEST_CASE("kmeans produces a monotone history and consistent centroids") {
  nmf::Rng rng(61);
  nmf::DenseMatrix x(5, 30);
  for (std::size_t j = 0; j < 30; ++j) {
    for (std::size_t i = 0; i < 5; ++i) x(i, j) = rng.uniform01();
  }
  const nmf::Clustering res = nmf::kmeans(x, 4, 7);
  REQUIRE(res.assignment.size() == 30);
  for (std::size_t a : res.assignment) CHECK(a < 4);
  REQUIRE(!res.history.empty());
  for (std::size_t t = 1; t < res.history.size(); ++t) {
    CHECK(res.history[t] <= res.history[t - 1] + 1e-12);
  }
  CHECK(res.objective == doctest::Approx(res.history.back()));

  // Each centroid is the mean of its assigned columns.
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < 30; ++j) {
      if (res.assignment[j] == k) members.push_back(j);
    }
    REQUIRE(!members.empty());
    for (std::size_t i = 0; i < 5; ++i) {
      double mean = 0.0;
      for (std::size_t j : members) mean += x(i, j);
      mean /= static_cast<double>(members.size());
      CHECK(res.centroids(i, k) == doctest::Approx(mean).epsilon(1e-12));
    }
  }

  // Every column sits closest to its own centroid.
  for (std::size_t j = 0; j < 30; ++j) {
    const double own = dist2_to(x, j, res.centroids, res.assignment[j]);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(own <= dist2_to(x, j, res.centroids, k) + 1e-9);
    }
  }

  const nmf::Clustering again = nmf::kmeans(x, 4, 7);
  CHECK(again.assignment == res.assignment);
  CHECK_THROWS_AS((void)nmf::kmeans(x, 0, 0), nmf::BadK);
  CHECK_THROWS_AS((void)nmf::kmeans(x, 31, 0), nmf::BadK);
}

TEST_CASE("kmeans separates two obvious blobs") {
  const nmf::DenseMatrix x = two_blobs(4, 8, 62);
  const nmf::Clustering res = nmf::kmeans(x, 2, 3);
  for (std::size_t j = 1; j < 8; ++j) {
    CHECK(res.assignment[j] == res.assignment[0]);
  }
  for (std::size_t j = 9; j < 16; ++j) {
    CHECK(res.assignment[j] == res.assignment[8]);
  }
  CHECK(res.assignment[0] != res.assignment[8]);
}

TEST_CASE("fcm yields unit column sums and sharp blob memberships") {
  const nmf::DenseMatrix x = two_blobs(4, 6, 63);
  const auto [hard, soft] = nmf::fcm(x, 2, 2.0, 5);
  REQUIRE(soft.u.rows() == 2);
  REQUIRE(soft.u.cols() == 12);
  for (std::size_t j = 0; j < 12; ++j) {
    double colsum = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(soft.u(k, j) >= 0.0);
      colsum += soft.u(k, j);
    }
    CHECK(std::fabs(colsum - 1.0) <= 1e-12);
  }
  // Points of the first blob should lean heavily toward one shared centroid.
  const std::size_t lead =
      soft.u(0, 0) > soft.u(1, 0) ? std::size_t{0} : std::size_t{1};
  for (std::size_t j = 0; j < 6; ++j) CHECK(soft.u(lead, j) > 0.9);
  for (std::size_t j = 6; j < 12; ++j) CHECK(soft.u(1 - lead, j) > 0.9);
  CHECK(hard.centroids.rows() == 4);
  CHECK(hard.centroids.cols() == 2);

  const auto [hard2, soft2] = nmf::fcm(x, 2, 2.0, 5);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t j = 0; j < 12; ++j) {
      CHECK(soft2.u(k, j) == soft.u(k, j));
    }
  }
  CHECK_THROWS_AS((void)nmf::fcm(x, 2, 1.0, 0), nmf::DomainError);
}

TEST_CASE("fcm gives a coinciding point full membership") {
  // Data columns sit exactly on two distinct values; centroids converge onto
  // them, so each column coincides with a centroid and gets a one-hot column.
  nmf::DenseMatrix x(3, 4);
  for (std::size_t i = 0; i < 3; ++i) {
    x(i, 0) = x(i, 1) = 1.0;
    x(i, 2) = x(i, 3) = 5.0;
  }
  const auto [hard, soft] = nmf::fcm(x, 2, 2.0, 9, 200, 1e-12);
  (void)hard;
  for (std::size_t j = 0; j < 4; ++j) {
    double top = 0.0;
    for (std::size_t k = 0; k < 2; ++k) top = std::max(top, soft.u(k, j));
    CHECK(top == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("cro_measure detects proportional rows") {
  nmf::DenseMatrix dup(3, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    const double base = 1.0 + static_cast<double>(j);
    dup(0, j) = base;
    dup(1, j) = 2.0 * base;
    dup(2, j) = 0.5 * base;
  }
  CHECK(nmf::cro_measure(dup) == doctest::Approx(1.0).epsilon(1e-12));

  nmf::DenseMatrix eye(2, 2);
  eye(0, 0) = eye(1, 1) = 1.0;
  CHECK(nmf::cro_measure(eye) == doctest::Approx(0.5).epsilon(1e-12));

  // Cross-check against the oracle SVD on a generic block.
  nmf::Rng rng(64);
  const nmf::DenseMatrix a = oracle::random_matrix(4, 6, rng);
  const auto sig = oracle::singular_values(a);
  double total = 0.0;
  for (double s : sig) total += s * s;
  CHECK(nmf::cro_measure(a) ==
        doctest::Approx(sig[0] * sig[0] / total).epsilon(1e-9));

  CHECK_THROWS_AS((void)nmf::cro_measure(nmf::DenseMatrix(2, 2)),
                  nmf::ZeroMatrix);
}

TEST_CASE("cro_cluster groups proportional rows together") {
  // Rows 0,2 are proportional, rows 1,3 are proportional, and the two
  // families are orthogonal, so the greedy merge must pair them up.
  nmf::DenseMatrix x(4, 4);
  x(0, 0) = 1.0;
  x(0, 1) = 2.0;
  x(2, 0) = 3.0;
  x(2, 1) = 6.0;
  x(1, 2) = 1.0;
  x(1, 3) = 4.0;
  x(3, 2) = 2.0;
  x(3, 3) = 8.0;
  const nmf::CroDendrogram den = nmf::cro_cluster(x, 2);
  REQUIRE(den.membership.size() == 4);
  CHECK(den.membership[0] == den.membership[2]);
  CHECK(den.membership[1] == den.membership[3]);
  CHECK(den.membership[0] != den.membership[1]);
  CHECK(den.membership[0] == 0);  // clusters ordered by smallest member
  CHECK(den.membership[1] == 1);
  REQUIRE(den.merges.size() == 2);
  CHECK(std::get<2>(den.merges[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)nmf::cro_cluster(x, 0), nmf::BadRank);
  CHECK_THROWS_AS((void)nmf::cro_cluster(x, 5), nmf::BadRank);
}

TEST_CASE("init_cro reconstructs data with proportional row groups exactly") {
  nmf::DenseMatrix x(4, 5);
  for (std::size_t j = 0; j < 5; ++j) {
    const double a = 0.5 + static_cast<double>(j);
    const double b = 3.0 - 0.4 * static_cast<double>(j);
    x(0, j) = a;
    x(1, j) = 2.0 * a;
    x(2, j) = b;
    x(3, j) = 0.25 * b;
  }
  const nmf::FactorPair pair = nmf::init_cro(x, 2);
  const nmf::DenseMatrix wh = oracle::matmul(pair.w, pair.h);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(wh(i, j) == doctest::Approx(x(i, j)).epsilon(1e-9));
    }
  }
  CHECK(pair.w.all_nonnegative());
  CHECK(pair.h.all_nonnegative());
}

TEST_CASE("kmeans variants share W and differ only in H") {
  nmf::Rng rng(65);
  nmf::DenseMatrix x(5, 20);
  for (std::size_t j = 0; j < 20; ++j) {
    for (std::size_t i = 0; i < 5; ++i) x(i, j) = rng.uniform01();
  }
  const auto a = nmf::init_kmeans(x, 3, nmf::KmeansVariant::RandomH, 8);
  const auto b = nmf::init_kmeans(x, 3, nmf::KmeansVariant::AbsProjection, 8);
  const auto c =
      nmf::init_kmeans(x, 3, nmf::KmeansVariant::ClippedProjection, 8);
  const auto d = nmf::init_kmeans(x, 3, nmf::KmeansVariant::Fuzzy, 8);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(a.w(i, k) == b.w(i, k));
      CHECK(a.w(i, k) == c.w(i, k));
      CHECK(a.w(i, k) == d.w(i, k));
    }
  }

  // Non-negative data gives non-negative projections, so the absolute and
  // clipped variants coincide.
  const nmf::DenseMatrix proj = oracle::matmul(oracle::transpose(a.w), x);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t j = 0; j < 20; ++j) {
      CHECK(b.h(k, j) == doctest::Approx(std::fabs(proj(k, j))).epsilon(1e-12));
      CHECK(c.h(k, j) == b.h(k, j));
    }
  }

  // Fuzzy memberships recompute from W: u_kj = 1 / sum_k' (d_k/d_k')^2
  // at fuzzifier 2 (squared distances, exponent 1/(m-1) = 1).
  for (std::size_t j = 0; j < 20; ++j) {
    double colsum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      double denom = 0.0;
      const double dk = dist2_to(x, j, a.w, k);
      for (std::size_t k2 = 0; k2 < 3; ++k2) {
        denom += dk / dist2_to(x, j, a.w, k2);
      }
      CHECK(d.h(k, j) == doctest::Approx(1.0 / denom).epsilon(1e-9));
      colsum += d.h(k, j);
    }
    CHECK(std::fabs(colsum - 1.0) <= 1e-9);
  }

  CHECK(nmf::kmeans_variant_from_name('a') == nmf::KmeansVariant::RandomH);
  CHECK(nmf::kmeans_variant_from_name('d') == nmf::KmeansVariant::Fuzzy);
  CHECK_THROWS_AS((void)nmf::kmeans_variant_from_name('e'), nmf::Error);
}

TEST_CASE("init_fcm exposes centroids and memberships as factors") {
  const nmf::DenseMatrix x = two_blobs(4, 5, 66);
  const nmf::FactorPair pair = nmf::init_fcm(x, 2, 4);
  CHECK(pair.w.rows() == 4);
  CHECK(pair.w.cols() == 2);
  CHECK(pair.h.rows() == 2);
  CHECK(pair.h.cols() == 10);
  for (std::size_t j = 0; j < 10; ++j) {
    double colsum = 0.0;
    for (std::size_t k = 0; k < 2; ++k) colsum += pair.h(k, j);
    CHECK(std::fabs(colsum - 1.0) <= 1e-10);
  }
  CHECK(pair.w.all_nonnegative());
  CHECK(pair.h.all_nonnegative());
}
