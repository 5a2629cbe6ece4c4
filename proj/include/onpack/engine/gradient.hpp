#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>

#include "onpack/engine/config.hpp"
#include "onpack/engine/memo.hpp"
#include "onpack/engine/sampling.hpp"
#include "onpack/model/process.hpp"
#include "onpack/model/scenario_tree.hpp"

namespace onpack {

// Key of draw j (1-based) of the conditional draw set of prefix key `key` at
// gradient iteration k.
DrawKey conditional_draw_key(std::uint64_t seed, std::size_t k, std::string_view key, std::size_t j);

// Resolves a sampled prefix (its key, length and item) to a node id.
using NodeInterner = std::function<std::uint32_t(std::string_view key, std::size_t length, const Item& item)>;

// Draw record of prefix S at iteration k through a generic simulator.
DrawRecord build_draw_record(const Simulator& sim, const Prefix& prefix, const Item& item, std::size_t k,
                             const IndexSample& aleph, const SolverConfig& config, const NodeInterner& intern,
                             MemoCounters* counters, bool keep_trajectories);

// Same record, sampled directly on tree node ids. Produces uses identical to
// build_draw_record on the tree's simulator, with node = tree id.
DrawRecord build_draw_record_tree(const TreeSimulator& sim, std::size_t node, std::size_t k,
                                  const IndexSample& aleph, const SolverConfig& config);

// The estimate G^k(X)_S from a draw record and the value of Y at every use
// (y[u] = Y(uses[u].node)):
//   Z(S) - (2/iota) sum_{i in a+(S)} a_i(S) (1/eta1) sum_j
//          phi'_theta((T/eta2) sum_{t in aleph, uses of draw j} a_i(S'^t) Y(S'^t) - b_i)
// The single implementation behind both the full-sweep algorithm and the
// recursive routine. Throws ContractViolation when some Y is outside [-1, 2].
double grad_from_record(const Item& item, const DrawRecord& record, std::span<const double> y,
                        const InstanceSpec& instance, const SolverConfig& config);

// Cached conditional draw set S^{S,k}: eta1 completions of `prefix`. Repeated
// calls with the same (prefix, k) return the stored list without simulating.
const std::vector<Trajectory>& conditional_draws(const Simulator& sim, MemoTable& memo, const Prefix& prefix,
                                                 std::size_t k);

// G^k(X)_S with Y supplied by `eval`. Uses the cached draw set.
double stochastic_grad_component(const std::function<double(const Prefix&)>& eval, const Simulator& sim,
                                 MemoTable& memo, const Prefix& prefix, std::size_t k);

}  // namespace onpack
