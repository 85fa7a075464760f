#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "nmf/errors.hpp"
#include "nmf/init_heuristic.hpp"
#include "oracles.hpp"

TEST_CASE("de_minimize recovers an interior quadratic optimum") {
  const std::vector<double> target{0.3, 0.7, 0.15};
  auto objective = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[i] - target[i];
      acc += d * d;
    }
    return acc;
  };
  nmf::DeConfig cfg;
  const nmf::DeResult res = nmf::de_minimize(objective, 3, cfg, 71);
  REQUIRE(res.best.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(res.best[i] - target[i]) <= 1e-5);
  }
  CHECK(res.value <= 1e-6);
  CHECK(res.value == doctest::Approx(objective(res.best)).epsilon(1e-12));
}

TEST_CASE("de_minimize respects the box even when the optimum lies outside") {
  auto objective = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double c : v) {
      const double d = c - 3.0;  // pulls toward 3, box caps at 1
      acc += d * d;
    }
    return acc;
  };
  nmf::DeConfig cfg;
  const nmf::DeResult res = nmf::de_minimize(objective, 2, cfg, 72);
  for (double c : res.best) {
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    CHECK(c == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("de_minimize is deterministic per seed and validates its config") {
  auto objective = [](const std::vector<double>& v) {
    return std::fabs(v[0] - 0.5) + std::fabs(v[1] - 0.25);
  };
  nmf::DeConfig cfg;
  const auto a = nmf::de_minimize(objective, 2, cfg, 9);
  const auto b = nmf::de_minimize(objective, 2, cfg, 9);
  CHECK(a.best == b.best);
  CHECK(a.value == b.value);

  nmf::DeConfig small;
  small.population = 3;  // rand/1 needs three partners plus the target
  CHECK_THROWS_AS(small.validate(), nmf::DomainError);
  CHECK_THROWS_AS((void)nmf::de_minimize(objective, 0, cfg, 0),
                  nmf::DomainError);
  nmf::DeConfig bad;
  bad.upper = -1.0;
  CHECK_THROWS_AS(bad.validate(), nmf::DomainError);
  nmf::DeConfig wild;
  wild.crossover = 1.5;
  CHECK_THROWS_AS(wild.validate(), nmf::DomainError);
}

TEST_CASE("init_pba fits factors inside the data box") {
  nmf::Rng rng(73);
  const nmf::DenseMatrix x = oracle::random_lowrank(6, 5, 2, rng);
  double hi = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 5; ++j) hi = std::max(hi, x(i, j));
  }
  nmf::DeConfig cfg;
  cfg.generations = 60;  // plenty for 2-dimensional subproblems
  const nmf::FactorPair pair = nmf::init_pba(x, 2, cfg, 74);
  CHECK(pair.w.rows() == 6);
  CHECK(pair.h.cols() == 5);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(pair.w(i, c) >= 0.0);
      CHECK(pair.w(i, c) <= hi);
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(pair.h(c, j) >= 0.0);
      CHECK(pair.h(c, j) <= hi);
    }
  }

  // The fit should land well below a blind guess on noiseless low-rank data.
  const double rel = oracle::frobenius_diff(x, oracle::matmul(pair.w, pair.h)) /
                     oracle::frobenius(x);
  CHECK(rel < 0.2);

  const nmf::FactorPair again = nmf::init_pba(x, 2, cfg, 74);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(again.w(i, c) == pair.w(i, c));
    }
  }
  CHECK_THROWS_AS((void)nmf::init_pba(x, 0, cfg, 0), nmf::BadRank);
}
