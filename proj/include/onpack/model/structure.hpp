#pragma once

#include <cstddef>

#include "onpack/model/scenario_tree.hpp"

namespace onpack {

struct StructureConstants {
  // Raw maxima over all trajectories.
  std::size_t U_raw = 0;
  std::size_t V_raw = 0;
  std::size_t W = 0;
  // Clamped as the analysis requires: U >= 2, V >= 1.
  std::size_t U = 2;
  std::size_t V = 1;
  std::size_t L = 1;      // max |a+(S)| observed, at least 1
  double iota = 1.0;      // min positive consumption observed (instance iota if none)
  double nu = 0.0;        // min_i b_i / T
  double lambda = 0.0;    // min(m, L T / min_i b_i)
  std::size_t V_bound = 0;  // min(m, ceil(L / nu)), m when nu = 0
};

// Exact scan over every leaf of the tree.
StructureConstants derive_structure_constants(const ScenarioTree& tree);

}  // namespace onpack
