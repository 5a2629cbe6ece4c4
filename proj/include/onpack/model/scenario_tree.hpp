#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "onpack/model/instance.hpp"
#include "onpack/model/prefix.hpp"
#include "onpack/model/process.hpp"

namespace onpack {

// Encodings that attach extra meaning to observations.
enum class EncodingKind { None, IndependentSet, Matching, MatchingOnline };

struct TreeNode {
  std::int64_t parent = -1;  // -1 for root-level nodes (parent is the empty history)
  std::size_t depth = 0;     // t, so the node is a D x t prefix
  double prob = 0.0;         // conditional probability given the parent
  double mu = 0.0;           // P(M_[t] = S)
  Item item;
  std::vector<double> observation;
  std::vector<std::size_t> children;
  std::string key;
  std::int64_t external_id = -1;
};

// Input form of a node. Observations default to {index among siblings}.
struct NodeSpec {
  std::int64_t id = 0;
  std::int64_t parent_id = -1;
  double prob = 0.0;
  Item item;
  std::optional<std::vector<double>> observation;
};

// Fully enumerated finite-support process. Node ids are dense, ordered by
// depth (parents precede children); the empty history is implicit.
class ScenarioTree {
 public:
  static constexpr std::size_t kDefaultNodeCap = 100000;

  static ScenarioTree build(InstanceSpec instance, std::vector<NodeSpec> nodes,
                            std::size_t node_cap = kDefaultNodeCap);

  const InstanceSpec& instance() const noexcept { return instance_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  std::span<const std::size_t> roots() const noexcept { return roots_; }
  std::span<const std::size_t> leaves() const noexcept { return leaves_; }
  // Children of node id, or the root-level nodes for id = npos.
  std::span<const std::size_t> children_of(std::size_t id) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::optional<std::size_t> find(const Prefix& prefix) const { return find_key(prefix.key()); }
  std::optional<std::size_t> find_key(std::string_view key) const;

  Prefix prefix_of(std::size_t id) const;
  // Ids of S^1, ..., S^t for the node S at depth t.
  std::vector<std::size_t> path_to(std::size_t id) const;

  // Sum of mu over all nodes; equals T for a valid tree.
  double total_mass() const;

  EncodingKind encoding() const noexcept { return encoding_; }
  std::size_t degree_bound() const noexcept { return degree_bound_; }
  void set_encoding(EncodingKind kind, std::size_t degree_bound) {
    encoding_ = kind;
    degree_bound_ = degree_bound;
  }

 private:
  void index();

  InstanceSpec instance_;
  std::size_t dim_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<std::size_t> leaves_;
  std::unordered_multimap<std::uint64_t, std::size_t> by_hash_;
  EncodingKind encoding_ = EncodingKind::None;
  std::size_t degree_bound_ = 0;
};

class TreeSimulator final : public Simulator {
 public:
  explicit TreeSimulator(std::shared_ptr<const ScenarioTree> tree);

  const InstanceSpec& instance() const override { return tree_->instance(); }
  std::size_t dim() const override { return tree_->dim(); }
  Trajectory complete(const Prefix& prefix, const DrawKey& key) const override;
  Item item(const Prefix& prefix) const override;
  std::vector<Item> readout(const Trajectory& trajectory) const override;
  std::optional<Block> block(const Prefix& prefix) const override;

  const ScenarioTree& tree() const { return *tree_; }
  // Node id of a nonempty prefix; SupportError when absent.
  std::size_t locate(std::string_view key) const;
  // Node ids of S^1..S^T of a trajectory.
  std::vector<std::size_t> path_ids(const Trajectory& trajectory) const;
  // The sampling step of complete() on node ids: ids of the sampled nodes at
  // depths depth(from)+1..T. from = ScenarioTree::npos starts at the root.
  void sample_below(std::size_t from, const DrawKey& key, std::vector<std::size_t>& out) const;

 private:
  std::shared_ptr<const ScenarioTree> tree_;
  std::vector<std::vector<double>> child_probs_;  // index 0: root level, id+1: node id
};

std::shared_ptr<TreeSimulator> tree_as_simulator(std::shared_ptr<const ScenarioTree> tree);

// Enumerates every positive-probability branch of a process.
ScenarioTree enumerate_tree(const Process& process, std::size_t node_cap = ScenarioTree::kDefaultNodeCap);

// One complete scenario: observation and item of every period.
struct Scenario {
  double prob = 0.0;
  std::vector<std::vector<double>> observations;
  std::vector<Item> items;
};

// Merges scenarios sharing prefixes into a tree. Scenarios that agree on a
// prefix must agree on its item. Below a zero-mass node children get uniform
// conditional probabilities.
ScenarioTree from_scenarios(InstanceSpec instance, std::vector<Scenario> scenarios,
                            std::size_t node_cap = ScenarioTree::kDefaultNodeCap);

struct RandomTreeParams {
  std::size_t T = 3;
  std::size_t m = 2;
  std::size_t L = 2;
  double iota = 0.5;
  std::size_t min_children = 1;
  std::size_t max_children = 3;
  std::size_t max_nodes = 100;
  bool binary_consumption = false;  // a in {0,1} when set
  double consume_prob = 0.6;        // chance that an item requests any resource
  double budget_lo = 0.5;
  double budget_hi = 2.0;
  bool integral_budgets = false;
  bool zero_prob_branches = false;  // occasionally emit prob-0 children
};

ScenarioTree random_tree(std::uint64_t seed, const RandomTreeParams& params);

}  // namespace onpack
