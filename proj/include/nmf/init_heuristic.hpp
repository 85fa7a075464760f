#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nmf/matrix.hpp"
#include "nmf/solvers.hpp"

namespace nmf {

// DE/rand/1/bin over the box [0, upper]^dim.
struct DeConfig {
  std::size_t population = 20;
  double weight = 0.8;     // differential weight F
  double crossover = 0.9;  // crossover probability CR
  std::size_t generations = 200;
  double upper = 1.0;

  void validate() const;
};

struct DeResult {
  std::vector<double> best;
  double value = 0.0;
};

// Classic differential evolution: rand/1 mutation, binomial crossover with a
// guaranteed coordinate, greedy selection. Deterministic per seed.
DeResult de_minimize(const std::function<double(const std::vector<double>&)>& objective,
                     std::size_t dim, const DeConfig& cfg, std::uint64_t seed);

// Population-based factor fit: H starts uniform random, then each W row is
// fit against H by DE, then each H column against the fitted W. Rows and
// columns are independent subproblems with seeds derived from (seed, index),
// so they may run concurrently with identical results.
FactorPair init_pba(const DenseMatrix& x, std::size_t r, const DeConfig& cfg,
                    std::uint64_t seed);

}  // namespace nmf
