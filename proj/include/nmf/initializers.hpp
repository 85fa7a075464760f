#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nmf/dataset.hpp"
#include "nmf/solvers.hpp"

namespace nmf {

// Catalog entry for one initialization strategy. Deterministic strategies
// ignore the seed and run once per benchmark cell; seeded ones are
// replicated. Default parameters (sample sizes, pools, bank shapes) are
// fixed here so a name alone identifies a strategy.
struct Initializer {
  std::string name;
  bool deterministic = false;
  std::string description;
  std::function<FactorPair(const Dataset&, std::size_t, std::uint64_t)> build;
};

const std::vector<Initializer>& initializer_registry();

// Throws Error for unknown names.
const Initializer& find_initializer(const std::string& name);

std::vector<std::string> initializer_names();

}  // namespace nmf
