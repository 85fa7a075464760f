#include "nmf/initializers.hpp"

#include <algorithm>

#include "nmf/errors.hpp"
#include "nmf/init_clustering.hpp"
#include "nmf/init_heuristic.hpp"
#include "nmf/init_lowrank.hpp"
#include "nmf/init_random.hpp"

namespace nmf {
namespace {

std::size_t default_sample(std::size_t n) {
  return std::max<std::size_t>(1, (n + 9) / 10);  // ceil(n/10)
}

std::size_t default_pool(std::size_t n, std::size_t r, std::size_t q) {
  const std::size_t pool = std::max(2 * r, (n + 4) / 5);  // ceil(n/5)
  return std::clamp(pool, std::min(q, n), n);
}

std::vector<Initializer> build_registry() {
  std::vector<Initializer> reg;
  reg.push_back({"random", false, "entries i.i.d. uniform on (0, 1]",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_random(d.matrix.rows(), d.matrix.cols(), r, seed);
                 }});
  reg.push_back({"random-acol", false,
                 "W columns average ceil(n/10) random data columns",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_random_acol(d.matrix, r,
                                           default_sample(d.matrix.cols()), seed);
                 }});
  reg.push_back({"random-c", false,
                 "column averaging restricted to the longest columns",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   const std::size_t q = default_sample(d.matrix.cols());
                   return init_random_c(d.matrix, r, q,
                                        default_pool(d.matrix.cols(), r, q),
                                        seed);
                 }});
  reg.push_back({"cooc", false,
                 "W columns sampled from the densest co-occurrence columns",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_cooccurrence(d.matrix, r, seed);
                 }});
  reg.push_back({"gabor", false,
                 "wavelet magnitude responses of random dataset images",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   if (!d.image_shape) {
                     throw NotAnImageDataset("dataset '" + d.name +
                                             "' has no image shape");
                   }
                   return init_gabor(d.matrix, d.image_shape->first,
                                     d.image_shape->second, r, GaborBank{},
                                     seed);
                 }});
  reg.push_back({"kmeans-a", false, "k-means centroids, H uniform random",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_kmeans(d.matrix, r, KmeansVariant::RandomH, seed);
                 }});
  reg.push_back({"kmeans-b", false, "k-means centroids, H = |W^T X|",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_kmeans(d.matrix, r, KmeansVariant::AbsProjection,
                                      seed);
                 }});
  reg.push_back({"kmeans-c", false, "k-means centroids, H = max(W^T X, 0)",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_kmeans(d.matrix, r,
                                      KmeansVariant::ClippedProjection, seed);
                 }});
  reg.push_back({"kmeans-d", false, "k-means centroids, H fuzzy memberships",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_kmeans(d.matrix, r, KmeansVariant::Fuzzy, seed);
                 }});
  reg.push_back({"fcm", false, "fuzzy c-means centroids and memberships",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_fcm(d.matrix, r, seed);
                 }});
  reg.push_back({"cro", true,
                 "rank-one factors of greedily merged row clusters",
                 [](const Dataset& d, std::size_t r, std::uint64_t) {
                   return init_cro(d.matrix, r);
                 }});
  reg.push_back({"pba", false,
                 "per-row/per-column differential-evolution fits",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_pba(d.matrix, r, DeConfig{}, seed);
                 }});
  reg.push_back({"svd-abs", true, "moduli of the truncated SVD factors",
                 [](const Dataset& d, std::size_t r, std::uint64_t) {
                   return init_svd_abs(d.matrix, r);
                 }});
  reg.push_back({"nndsvd", true, "sign-split rank-one SVD terms",
                 [](const Dataset& d, std::size_t r, std::uint64_t) {
                   return init_nndsvd(d.matrix, r);
                 }});
  reg.push_back({"nnsvd-lrc", true,
                 "half-rank SVD splitting with multiplicative refinement",
                 [](const Dataset& d, std::size_t r, std::uint64_t) {
                   return init_nnsvd_lrc(d.matrix, r);
                 }});
  reg.push_back({"npca", true, "clipped principal components",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_npca(d.matrix, r, seed);
                 }});
  reg.push_back({"nica", false,
                 "magnitudes of independent components, scale-matched",
                 [](const Dataset& d, std::size_t r, std::uint64_t seed) {
                   return init_nica(d.matrix, r, seed);
                 }});
  return reg;
}

}  // namespace

const std::vector<Initializer>& initializer_registry() {
  static const std::vector<Initializer> registry = build_registry();
  return registry;
}

const Initializer& find_initializer(const std::string& name) {
  for (const Initializer& init : initializer_registry()) {
    if (init.name == name) return init;
  }
  throw Error("unknown initializer '" + name + "'");
}

std::vector<std::string> initializer_names() {
  const auto& registry = initializer_registry();
  std::vector<std::string> names(registry.size());
  for (std::size_t i = 0; i < registry.size(); ++i) names[i] = registry[i].name;
  return names;
}

}  // namespace nmf
