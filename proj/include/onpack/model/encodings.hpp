#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "onpack/model/process.hpp"
#include "onpack/model/scenario_tree.hpp"

namespace onpack {

struct EncodedInstance {
  std::shared_ptr<const ScenarioTree> tree;
  std::shared_ptr<TreeSimulator> sim;
};

// ---- Online bipartite max-weight independent set ---------------------------
//
// Observation of period t (node t): [side, weight, e_1, ..., e_Delta] where
// e_k are the resource indices of the node's potential edges, -1 padded.
// Edge indices are the rank of the edge (by sorted endpoints) among the
// edges of the scenario, so both endpoints name the same resource.

struct IsGraph {
  std::vector<double> weight;  // per node, in [0, 1]
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

struct IsProcess {
  std::size_t n = 0;
  std::size_t delta = 1;
  std::vector<int> side;  // 0 = left partite, 1 = right partite; known in advance
  std::vector<std::pair<double, IsGraph>> scenarios;
};

EncodedInstance encode_is(const IsProcess& process);

// Partite (0 left, 1 right) of the node revealed last in an IS prefix.
int is_partite_of(const Prefix& prefix);

// True when every a_i(M_[t]) is determined by M_[tau_i], tau_i the first
// period touching resource i (the traditional, endpoint-revealing variant).
bool is_traditional_measurable(const ScenarioTree& tree);

// ---- Online max-weight bipartite matching ----------------------------------
//
// Observation of period t (potential edge t): [realized, u, v, w]; once an
// edge is unrealized every later one is too.

struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double w = 1.0;
};

struct MwmProcess {
  std::size_t n = 0;
  std::size_t delta = 1;
  std::vector<std::pair<double, std::vector<WeightedEdge>>> scenarios;  // arrival order
};

EncodedInstance encode_mwm(const MwmProcess& process);

// ---- Matching with online nodes --------------------------------------------
//
// Offline nodes 0..nL-1 use resources 0..nL-1, online node o uses nL+o.
// Online node o's edges occupy consecutive periods t1..t2, one per offline
// neighbour in increasing order. Observation: [realized, offline, online, t1,
// t2, nbr_1, ..., nbr_Delta]; the whole block is determined at t1.

struct MmoProcess {
  std::size_t n_offline = 0;
  std::size_t n_online = 0;
  std::size_t delta = 1;
  // Per scenario: offline neighbours of each online node, in arrival order.
  std::vector<std::pair<double, std::vector<std::vector<std::uint32_t>>>> scenarios;
};

EncodedInstance encode_mmo(const MmoProcess& process);

std::optional<Block> decode_online_block(const Prefix& prefix, std::size_t delta);

// ---- Random processes for tests and the generator ---------------------------

IsProcess random_is_process(std::uint64_t seed, std::size_t n, std::size_t delta, std::size_t n_scenarios,
                            double edge_prob = 0.5);
MwmProcess random_mwm_process(std::uint64_t seed, std::size_t n, std::size_t delta, std::size_t n_scenarios);
MmoProcess random_mmo_process(std::uint64_t seed, std::size_t n_offline, std::size_t n_online, std::size_t delta,
                              std::size_t n_scenarios);

}  // namespace onpack
