#pragma once

#include <cstddef>
#include <vector>

#include "onpack/engine/config.hpp"
#include "onpack/model/scenario_tree.hpp"

namespace onpack {

struct Algorithm1Result {
  // X^1..X^K over tree node ids; empty unless keep_iterates was set.
  std::vector<std::vector<double>> iterates;
  // (1/K) sum_{k=1..K} X^k; empty when K = 0.
  std::vector<double> average;
  std::size_t iterations = 0;
};

// Stochastic projected gradient ascent over every prefix of an explicit tree,
// X^{k+1} = Pi_[0,1](Y^k + alpha G^k(Y^k)) with Y^k = (1 + beta_k) X^k - beta_k X^{k-1}.
// Zero-mass prefixes stay at 0. Agrees bitwise with the recursive routine.
Algorithm1Result run_algorithm1_explicit(const TreeSimulator& sim, const SolverConfig& config,
                                         bool keep_iterates = true);

}  // namespace onpack
