#include "nmf/init_heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nmf/errors.hpp"
#include "nmf/rng.hpp"

namespace nmf {

void DeConfig::validate() const {
  if (population < 4) {
    throw DomainError("rand/1 mutation needs a population of at least 4");
  }
  if (weight <= 0.0 || crossover < 0.0 || crossover > 1.0) {
    throw DomainError("differential weight must be positive and crossover in [0, 1]");
  }
  if (upper < 0.0 || !std::isfinite(upper)) {
    throw DomainError("box upper bound must be finite and non-negative");
  }
}

DeResult de_minimize(const std::function<double(const std::vector<double>&)>& objective,
                     std::size_t dim, const DeConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (dim == 0) throw DomainError("cannot optimize over zero dimensions");
  Rng rng(seed);
  const std::size_t np = cfg.population;

  std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
  std::vector<double> fitness(np);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      pop[i][d] = rng.uniform01() * cfg.upper;
    }
    fitness[i] = objective(pop[i]);
  }

  std::vector<double> trial(dim);
  for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t a, b, c;
      do { a = rng.index(np); } while (a == i);
      do { b = rng.index(np); } while (b == i || b == a);
      do { c = rng.index(np); } while (c == i || c == a || c == b);
      const std::size_t jrand = rng.index(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        if (d == jrand || rng.uniform01() <= cfg.crossover) {
          trial[d] = std::clamp(pop[a][d] + cfg.weight * (pop[b][d] - pop[c][d]),
                                0.0, cfg.upper);
        } else {
          trial[d] = pop[i][d];
        }
      }
      const double value = objective(trial);
      if (value <= fitness[i]) {
        pop[i] = trial;
        fitness[i] = value;
      }
    }
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < np; ++i) {
    if (fitness[i] < fitness[arg]) arg = i;
  }
  return DeResult{pop[arg], fitness[arg]};
}

FactorPair init_pba(const DenseMatrix& x, std::size_t r, const DeConfig& cfg,
                    std::uint64_t seed) {
  if (r == 0 || r > std::min(x.rows(), x.cols())) {
    throw BadRank("rank " + std::to_string(r) + " out of range for " +
                  std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                  " data");
  }
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  double upper = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) upper = std::max(upper, x(i, j));
  }
  DeConfig box = cfg;
  box.upper = upper;

  Rng rng(derive_seed(seed, {"pba", "h0"}));
  DenseMatrix h(r, n);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) h(i, j) = rng.uniform01() * upper;
  }

  DenseMatrix w(m, r);
  // Residual of one data row against candidate coefficients over fixed H.
  auto fit_row = [&](std::size_t row) {
    auto objective = [&](const std::vector<double>& cand) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double approx = 0.0;
        for (std::size_t a = 0; a < r; ++a) approx += cand[a] * h(a, j);
        const double d = x(row, j) - approx;
        acc += d * d;
      }
      return acc;
    };
    const DeResult fit =
        de_minimize(objective, r, box, derive_seed(seed, {"pba", "row"}, row));
    for (std::size_t a = 0; a < r; ++a) w(row, a) = fit.best[a];
  };
#pragma omp parallel for schedule(dynamic)
  for (std::size_t row = 0; row < m; ++row) fit_row(row);

  auto fit_col = [&](std::size_t col) {
    auto objective = [&](const std::vector<double>& cand) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double approx = 0.0;
        for (std::size_t a = 0; a < r; ++a) approx += w(i, a) * cand[a];
        const double d = x(i, col) - approx;
        acc += d * d;
      }
      return acc;
    };
    const DeResult fit =
        de_minimize(objective, r, box, derive_seed(seed, {"pba", "col"}, col));
    for (std::size_t a = 0; a < r; ++a) h(a, col) = fit.best[a];
  };
#pragma omp parallel for schedule(dynamic)
  for (std::size_t col = 0; col < n; ++col) fit_col(col);

  FactorPair pair;
  pair.w = std::move(w);
  pair.h = std::move(h);
  pair.rank = r;
  pair.origin = "pba";
  pair.seed = seed;
  return pair;
}

}  // namespace nmf
