#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "nmf/matrix.hpp"
#include "nmf/solvers.hpp"

namespace nmf {

// Hard partition of data columns. `history` records the within-cluster
// sum of squared distances after every centroid update (non-increasing).
struct Clustering {
  DenseMatrix centroids;               // m x k
  std::vector<std::size_t> assignment; // n entries in [0, k)
  double objective = 0.0;
  std::vector<double> history;
};

// Lloyd iterations seeded from k distinct random data columns. Ties in the
// assignment go to the lower cluster index; empty clusters are re-seeded
// from the point farthest from its centroid.
Clustering kmeans(const DenseMatrix& x, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter = 100);

// Soft memberships; every column sums to one.
struct FuzzyMembership {
  DenseMatrix u;  // k x n
  double fuzzifier = 2.0;
};

// Fuzzy c-means. Stops when no membership moves by more than `tol`.
// A column coinciding with a centroid gets full membership there.
std::pair<Clustering, FuzzyMembership> fcm(const DenseMatrix& x, std::size_t k,
                                           double fuzzifier, std::uint64_t seed,
                                           std::size_t max_iter = 100,
                                           double tol = 1e-9);

// Rank-one concentration of a row block: sigma_1^2 / ||A||_F^2 in (0, 1].
// Equals 1 exactly when the rows are pairwise proportional.
double cro_measure(const DenseMatrix& rows);

// Greedy hierarchical merge trace. `merges` lists (a, b, measure) with
// a < b the smallest row indices of the merged clusters at that step;
// `membership` maps each row to its final cluster (clusters ordered by
// smallest member).
struct CroDendrogram {
  std::vector<std::tuple<std::size_t, std::size_t, double>> merges;
  std::vector<std::size_t> membership;
};

// Start from singleton rows; repeatedly merge the pair with the highest
// combined measure (ties to the lexicographically smallest index pair)
// until r clusters remain. O(m^3) pair evaluations, desk-scale only.
CroDendrogram cro_cluster(const DenseMatrix& x, std::size_t r);

enum class KmeansVariant { RandomH, AbsProjection, ClippedProjection, Fuzzy };

KmeansVariant kmeans_variant_from_name(char name);  // 'a'..'d'

// W = centroids of a k-means run with k = r. H per variant:
//   RandomH            uniform (0, 1]
//   AbsProjection      |W^T x|
//   ClippedProjection  max(W^T x, 0)
//   Fuzzy              soft memberships of columns to centroids (fuzzifier 2)
FactorPair init_kmeans(const DenseMatrix& x, std::size_t r,
                       KmeansVariant variant, std::uint64_t seed);

// W = fuzzy c-means centroids, H = membership matrix.
FactorPair init_fcm(const DenseMatrix& x, std::size_t r, std::uint64_t seed);

// Rows grouped by the merge trace; each cluster's block is replaced by its
// best rank-one factor: W carries |u_1| on the cluster's rows, H's row is
// sigma_1 |v_1|^T. Deterministic, no seed.
FactorPair init_cro(const DenseMatrix& x, std::size_t r);

}  // namespace nmf
