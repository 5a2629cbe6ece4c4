#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "onpack/model/process.hpp"
#include "onpack/model/rng.hpp"
#include "onpack/model/scenario_tree.hpp"

namespace onpack::fixtures {

// T=1, m=1, a single prefix with reward z and consumption a against budget b.
std::shared_ptr<ScenarioTree> one_node_tree(double z, double a, double b, double iota = 1.0);

// The two-period instance: OPT_pack = OPT_lp = 0.6.
std::shared_ptr<ScenarioTree> two_period();

// Uniform random values in [lo, hi] per node, zero on zero-mass nodes.
std::vector<double> random_solution(const ScenarioTree& tree, std::uint64_t seed, double lo = 0.0, double hi = 1.0);

// Random tree with 0/1 consumption and integral budgets, suitable for the DP.
ScenarioTree random_dp_tree(std::uint64_t seed, std::size_t T, std::size_t m, std::size_t max_nodes);

// Exhaustive maximum of sum mu Z x over feasible 0/1 vectors (<= 20 nodes).
double brute_force_pack(const ScenarioTree& tree);

// Horizon-T process (T even) built from independent two-period blocks. Block
// j covers periods 2j+1 and 2j+2; a fair coin drawn at 2j+1 and repeated at
// 2j+2 selects resource 2j or 2j+1, which both periods consume. Every
// resource is touched at most twice, so L = 1 and U = 2 for every T.
class PairBlockProcess final : public Process {
 public:
  explicit PairBlockProcess(std::size_t T);
  const InstanceSpec& instance() const override { return spec_; }
  std::size_t dim() const override { return 1; }
  std::vector<Branch> branches(const Prefix& prefix) const override;
  Item item(const Prefix& prefix) const override;

 private:
  InstanceSpec spec_;
};

// Convenience uniform stream for tests.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed, std::uint64_t tag = 0) : s_(DrawKey{seed, Stream::Test, {tag, 0, 0}}) {}
  double uniform() { return s_.next_uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * s_.next_uniform(); }
  std::uint64_t below(std::uint64_t n) { return s_.next_below(n); }

 private:
  KeyedStream s_;
};

}  // namespace onpack::fixtures
