#include "nmf/init_clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nmf/errors.hpp"
#include "nmf/kernels.hpp"
#include "nmf/linalg.hpp"
#include "nmf/rng.hpp"

namespace nmf {
namespace {

void check_nonnegative_data(const DenseMatrix& x) {
  if (!x.all_nonnegative()) {
    throw DomainError("clustering initializers require non-negative data");
  }
}

void check_k(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) {
    throw BadK("cluster count " + std::to_string(k) + " out of range [1, " +
               std::to_string(n) + "]");
  }
}

double sq_dist_to_column(const DenseMatrix& x, std::size_t col,
                         const DenseMatrix& c, std::size_t ccol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double d = x(i, col) - c(i, ccol);
    acc += d * d;
  }
  return acc;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = rng.uniform01();
  }
  return out;
}

}  // namespace

Clustering kmeans(const DenseMatrix& x, std::size_t k, std::uint64_t seed,
                  std::size_t max_iter) {
  check_k(x.cols(), k);
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  Rng rng(seed);

  Clustering out;
  out.centroids = DenseMatrix(m, k);
  const auto picks = rng.sample_without_replacement(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    out.centroids.set_column(c, x.column(picks[c]));
  }
  out.assignment.assign(n, 0);

  std::vector<std::size_t> prev(n, k);  // sentinel forces first pass
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    for (std::size_t j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double d = sq_dist_to_column(x, j, out.centroids, c);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      out.assignment[j] = arg;
    }

    std::vector<std::size_t> counts(k, 0);
    DenseMatrix sums(m, k);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t c = out.assignment[j];
      ++counts[c];
      for (std::size_t i = 0; i < m; ++i) sums(i, c) += x(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;  // re-seeded below
      for (std::size_t i = 0; i < m; ++i) {
        out.centroids(i, c) = sums(i, c) / static_cast<double>(counts[c]);
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      double worst = -1.0;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double d =
            sq_dist_to_column(x, j, out.centroids, out.assignment[j]);
        if (d > worst) {
          worst = d;
          arg = j;
        }
      }
      out.centroids.set_column(c, x.column(arg));
    }

    double objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      objective += sq_dist_to_column(x, j, out.centroids, out.assignment[j]);
    }
    out.history.push_back(objective);
    out.objective = objective;

    if (out.assignment == prev) break;
    prev = out.assignment;
  }
  return out;
}

std::pair<Clustering, FuzzyMembership> fcm(const DenseMatrix& x, std::size_t k,
                                           double fuzzifier, std::uint64_t seed,
                                           std::size_t max_iter, double tol) {
  check_k(x.cols(), k);
  if (fuzzifier <= 1.0) {
    throw DomainError("fuzzifier must exceed 1, got " +
                      std::to_string(fuzzifier));
  }
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  Rng rng(seed);

  DenseMatrix u(k, n);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      u(c, j) = 0.1 + rng.uniform01();
      sum += u(c, j);
    }
    for (std::size_t c = 0; c < k; ++c) u(c, j) /= sum;
  }

  DenseMatrix centroids(m, k);
  DenseMatrix dist2(k, n);
  // Membership update uses (d_c / d_c2)^(2/(m-1)); on squared distances the
  // exponent halves.
  const double expo = 1.0 / (fuzzifier - 1.0);
  double objective = 0.0;
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    for (std::size_t c = 0; c < k; ++c) {
      double denom = 0.0;
      std::vector<double> num(m, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double w = std::pow(u(c, j), fuzzifier);
        denom += w;
        for (std::size_t i = 0; i < m; ++i) num[i] += w * x(i, j);
      }
      for (std::size_t i = 0; i < m; ++i) {
        centroids(i, c) = denom > 0.0 ? num[i] / denom : 0.0;
      }
    }
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t j = 0; j < n; ++j) {
        dist2(c, j) = sq_dist_to_column(x, j, centroids, c);
      }
    }

    double delta = 0.0;
    objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t coincident = k;
      for (std::size_t c = 0; c < k; ++c) {
        if (dist2(c, j) == 0.0) {
          coincident = c;
          break;
        }
      }
      for (std::size_t c = 0; c < k; ++c) {
        double next;
        if (coincident < k) {
          next = c == coincident ? 1.0 : 0.0;
        } else {
          double denom = 0.0;
          for (std::size_t c2 = 0; c2 < k; ++c2) {
            denom += std::pow(dist2(c, j) / dist2(c2, j), expo);
          }
          next = 1.0 / denom;
        }
        delta = std::max(delta, std::fabs(next - u(c, j)));
        u(c, j) = next;
        objective += std::pow(next, fuzzifier) * dist2(c, j);
      }
    }
    if (delta < tol) break;
  }

  Clustering hard;
  hard.centroids = centroids;
  hard.assignment.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    double best = -1.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (u(c, j) > best) {
        best = u(c, j);
        hard.assignment[j] = c;
      }
    }
  }
  hard.objective = objective;
  hard.history.push_back(objective);
  return {hard, FuzzyMembership{u, fuzzifier}};
}

double cro_measure(const DenseMatrix& rows) {
  const double total = frobenius_norm(rows);
  if (total <= 0.0) {
    throw ZeroMatrix("rank-one concentration of an all-zero block");
  }
  const TruncatedSvd svd = truncated_svd(rows, 1);
  const double s = svd.sigma[0];
  return (s * s) / (total * total);
}

CroDendrogram cro_cluster(const DenseMatrix& x, std::size_t r) {
  const std::size_t m = x.rows();
  if (r == 0 || r > m) {
    throw BadRank("cluster count " + std::to_string(r) + " out of range [1, " +
                  std::to_string(m) + "]");
  }
  // Clusters as sorted row-index sets, kept ordered by smallest member.
  std::vector<std::vector<std::size_t>> clusters(m);
  for (std::size_t i = 0; i < m; ++i) clusters[i] = {i};

  auto stack_rows = [&](const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b) {
    DenseMatrix block(a.size() + b.size(), x.cols());
    std::size_t out_row = 0;
    for (std::size_t src : a) block.set_row(out_row++, x.row(src));
    for (std::size_t src : b) block.set_row(out_row++, x.row(src));
    return block;
  };

  CroDendrogram dendro;
  while (clusters.size() > r) {
    double best = -1.0;
    std::size_t best_a = 0;
    std::size_t best_b = 1;
    for (std::size_t a = 0; a + 1 < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double value;
        try {
          value = cro_measure(stack_rows(clusters[a], clusters[b]));
        } catch (const ZeroMatrix&) {
          value = 0.0;  // all-zero block: maximally uninformative merge
        }
        if (value > best) {
          best = value;
          best_a = a;
          best_b = b;
        }
      }
    }
    dendro.merges.emplace_back(clusters[best_a].front(),
                               clusters[best_b].front(), best);
    auto merged = clusters[best_a];
    merged.insert(merged.end(), clusters[best_b].begin(),
                  clusters[best_b].end());
    std::sort(merged.begin(), merged.end());
    clusters.erase(clusters.begin() + static_cast<long>(best_b));
    clusters[best_a] = std::move(merged);
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
  }

  dendro.membership.assign(m, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t row : clusters[c]) dendro.membership[row] = c;
  }
  return dendro;
}

KmeansVariant kmeans_variant_from_name(char name) {
  switch (name) {
    case 'a': return KmeansVariant::RandomH;
    case 'b': return KmeansVariant::AbsProjection;
    case 'c': return KmeansVariant::ClippedProjection;
    case 'd': return KmeansVariant::Fuzzy;
    default:
      throw DomainError(std::string("unknown k-means variant '") + name + "'");
  }
}

FactorPair init_kmeans(const DenseMatrix& x, std::size_t r,
                       KmeansVariant variant, std::uint64_t seed) {
  check_nonnegative_data(x);
  if (r == 0 || r > std::min(x.rows(), x.cols())) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                  " data");
  }
  Rng rng(seed);
  const Clustering clustering = kmeans(x, r, rng.next_u64());

  FactorPair pair;
  pair.w = clustering.centroids;
  pair.rank = r;
  pair.seed = seed;
  switch (variant) {
    case KmeansVariant::RandomH:
      pair.h = random_matrix(r, x.cols(), rng);
      pair.origin = "kmeans-a";
      break;
    case KmeansVariant::AbsProjection: {
      DenseMatrix p = matmul_tn(pair.w, x);
      for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = 0; j < p.cols(); ++j) {
          p(i, j) = std::fabs(p(i, j));
        }
      }
      pair.h = std::move(p);
      pair.origin = "kmeans-b";
      break;
    }
    case KmeansVariant::ClippedProjection: {
      DenseMatrix p = matmul_tn(pair.w, x);
      for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = 0; j < p.cols(); ++j) {
          p(i, j) = std::max(p(i, j), 0.0);
        }
      }
      pair.h = std::move(p);
      pair.origin = "kmeans-c";
      break;
    }
    case KmeansVariant::Fuzzy: {
      // Soft membership of each column against the hard centroids,
      // fuzzifier fixed at 2: h_cj = 1 / sum_c2 (d_c / d_c2)^2.
      DenseMatrix h(r, x.cols());
      for (std::size_t j = 0; j < x.cols(); ++j) {
        std::vector<double> d2(r);
        std::size_t coincident = r;
        for (std::size_t c = 0; c < r; ++c) {
          d2[c] = sq_dist_to_column(x, j, pair.w, c);
          if (d2[c] == 0.0 && coincident == r) coincident = c;
        }
        for (std::size_t c = 0; c < r; ++c) {
          if (coincident < r) {
            h(c, j) = c == coincident ? 1.0 : 0.0;
          } else {
            double denom = 0.0;
            for (std::size_t c2 = 0; c2 < r; ++c2) denom += d2[c] / d2[c2];
            h(c, j) = 1.0 / denom;
          }
        }
      }
      pair.h = std::move(h);
      pair.origin = "kmeans-d";
      break;
    }
  }
  return pair;
}

FactorPair init_fcm(const DenseMatrix& x, std::size_t r, std::uint64_t seed) {
  check_nonnegative_data(x);
  if (r == 0 || r > std::min(x.rows(), x.cols())) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                  " data");
  }
  auto [clustering, membership] = fcm(x, r, 2.0, seed);
  FactorPair pair;
  pair.w = clustering.centroids;
  pair.h = membership.u;
  pair.rank = r;
  pair.origin = "fcm";
  pair.seed = seed;
  return pair;
}

FactorPair init_cro(const DenseMatrix& x, std::size_t r) {
  check_nonnegative_data(x);
  if (r == 0 || r > std::min(x.rows(), x.cols())) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                  " data");
  }
  const CroDendrogram dendro = cro_cluster(x, r);

  FactorPair pair;
  pair.w = DenseMatrix(x.rows(), r);
  pair.h = DenseMatrix(r, x.cols());
  for (std::size_t c = 0; c < r; ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (dendro.membership[i] == c) rows.push_back(i);
    }
    DenseMatrix block(rows.size(), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      block.set_row(i, x.row(rows[i]));
    }
    if (frobenius_norm(block) <= 0.0) continue;  // zero rows stay zero
    const TruncatedSvd svd = truncated_svd(block, 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      pair.w(rows[i], c) = std::fabs(svd.u(i, 0));
    }
    for (std::size_t j = 0; j < x.cols(); ++j) {
      pair.h(c, j) = svd.sigma[0] * std::fabs(svd.v(j, 0));
    }
  }
  pair.rank = r;
  pair.origin = "cro";
  return pair;
}

}  // namespace nmf
