#include "onpack/model/scenario_tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>

#include "onpack/errors.hpp"
#include "onpack/model/encodings.hpp"
#include "onpack/model/rng.hpp"

namespace onpack {

namespace {

constexpr double kProbTol = 1e-9;

}  // namespace

ScenarioTree ScenarioTree::build(InstanceSpec instance, std::vector<NodeSpec> specs, std::size_t node_cap) {
  instance.validate();
  if (specs.empty()) throw InstanceError("tree has no nodes");
  if (specs.size() > node_cap) {
    throw CapacityError("tree has " + std::to_string(specs.size()) + " nodes, cap is " + std::to_string(node_cap));
  }

  std::unordered_map<std::int64_t, std::size_t> by_id;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    if (!by_id.emplace(specs[k].id, k).second) {
      throw InstanceError("duplicate prefix_id " + std::to_string(specs[k].id));
    }
  }
  std::vector<std::vector<std::size_t>> kids(specs.size());
  std::vector<std::size_t> top;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    if (specs[k].parent_id < 0) {
      top.push_back(k);
      continue;
    }
    auto it = by_id.find(specs[k].parent_id);
    if (it == by_id.end()) throw InstanceError("unknown parent_id " + std::to_string(specs[k].parent_id));
    kids[it->second].push_back(k);
  }
  if (top.empty()) throw InstanceError("tree has no root-level nodes");

  ScenarioTree tree;
  tree.instance_ = std::move(instance);
  const std::size_t T = tree.instance_.T;

  // Breadth-first renumbering; input index -> dense id.
  std::vector<std::size_t> dense(specs.size(), npos);
  std::deque<std::pair<std::size_t, std::int64_t>> queue;  // (input index, dense parent)
  auto enqueue_children = [&](const std::vector<std::size_t>& list, std::int64_t parent) {
    for (std::size_t k : list) queue.emplace_back(k, parent);
  };
  enqueue_children(top, -1);
  std::vector<std::size_t> sibling_rank(specs.size(), 0);
  for (std::size_t r = 0; r < top.size(); ++r) sibling_rank[top[r]] = r;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    for (std::size_t r = 0; r < kids[k].size(); ++r) sibling_rank[kids[k][r]] = r;
  }

  std::optional<std::size_t> dim;
  while (!queue.empty()) {
    auto [k, parent] = queue.front();
    queue.pop_front();
    NodeSpec& spec = specs[k];
    TreeNode node;
    node.parent = parent;
    node.external_id = spec.id;
    node.depth = parent < 0 ? 1 : tree.nodes_[static_cast<std::size_t>(parent)].depth + 1;
    if (node.depth > T) throw InstanceError("node deeper than the horizon");
    if (!(spec.prob >= 0.0 && spec.prob <= 1.0 + kProbTol)) throw InstanceError("conditional probability outside [0, 1]");
    node.prob = spec.prob;
    node.mu = (parent < 0 ? 1.0 : tree.nodes_[static_cast<std::size_t>(parent)].mu) * spec.prob;
    node.observation = spec.observation ? *spec.observation
                                        : std::vector<double>{static_cast<double>(sibling_rank[k])};
    if (!dim) dim = node.observation.size();
    if (node.observation.size() != *dim || *dim == 0) throw InstanceError("observations must share one nonzero dimension");
    const Prefix step(*dim, node.observation);
    node.observation.assign(step.values().begin(), step.values().end());
    node.key = (parent < 0 ? std::string() : tree.nodes_[static_cast<std::size_t>(parent)].key) + step.key();
    node.item = std::move(spec.item);
    node.item.consumption = make_consumption(std::move(node.item.consumption));
    tree.instance_.check_item(node.item);
    const std::size_t id = tree.nodes_.size();
    if (dense[k] != npos) throw InstanceError("node reachable twice");
    dense[k] = id;
    if (parent >= 0) tree.nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
    else tree.roots_.push_back(id);
    tree.nodes_.push_back(std::move(node));
    enqueue_children(kids[k], static_cast<std::int64_t>(id));
  }
  if (tree.nodes_.size() != specs.size()) throw InstanceError("some nodes are not connected to the root");
  tree.dim_ = *dim;

  auto check_sum = [](double sum, const char* what) {
    if (std::fabs(sum - 1.0) > kProbTol) throw InstanceError(std::string(what) + " probabilities sum to " + std::to_string(sum));
  };
  double root_sum = 0.0;
  for (std::size_t r : tree.roots_) root_sum += tree.nodes_[r].prob;
  check_sum(root_sum, "root-level");
  for (std::size_t id = 0; id < tree.nodes_.size(); ++id) {
    const TreeNode& n = tree.nodes_[id];
    if (n.children.empty()) {
      if (n.depth != T) throw InstanceError("leaf at depth " + std::to_string(n.depth) + " but T = " + std::to_string(T));
      tree.leaves_.push_back(id);
      continue;
    }
    double sum = 0.0;
    for (std::size_t c : n.children) sum += tree.nodes_[c].prob;
    check_sum(sum, "child");
  }
  tree.index();
  const double mass = tree.total_mass();
  if (std::fabs(mass - static_cast<double>(T)) > kProbTol * std::max<double>(1.0, T)) {
    throw InstanceError("total prefix mass " + std::to_string(mass) + " differs from T");
  }
  return tree;
}

void ScenarioTree::index() {
  by_hash_.clear();
  by_hash_.reserve(nodes_.size());
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (find_key(nodes_[id].key)) throw InstanceError("two nodes share an observation history");
    by_hash_.emplace(key_hash(nodes_[id].key), id);
  }
}

std::span<const std::size_t> ScenarioTree::children_of(std::size_t id) const {
  if (id == npos) return roots_;
  return nodes_.at(id).children;
}

std::optional<std::size_t> ScenarioTree::find_key(std::string_view key) const {
  auto [lo, hi] = by_hash_.equal_range(key_hash(key));
  for (auto it = lo; it != hi; ++it) {
    if (nodes_[it->second].key == key) return it->second;
  }
  return std::nullopt;
}

Prefix ScenarioTree::prefix_of(std::size_t id) const { return Prefix::from_key(dim_, nodes_.at(id).key); }

std::vector<std::size_t> ScenarioTree::path_to(std::size_t id) const {
  std::vector<std::size_t> path(nodes_.at(id).depth);
  std::int64_t cur = static_cast<std::int64_t>(id);
  for (std::size_t k = path.size(); k-- > 0;) {
    path[k] = static_cast<std::size_t>(cur);
    cur = nodes_[static_cast<std::size_t>(cur)].parent;
  }
  return path;
}

double ScenarioTree::total_mass() const {
  long double sum = 0.0L;
  for (const auto& n : nodes_) sum += n.mu;
  return static_cast<double>(sum);
}

TreeSimulator::TreeSimulator(std::shared_ptr<const ScenarioTree> tree) : tree_(std::move(tree)) {
  if (!tree_) throw ContractViolation("null tree");
  child_probs_.resize(tree_->size() + 1);
  for (std::size_t r : tree_->roots()) child_probs_[0].push_back(tree_->node(r).prob);
  for (std::size_t id = 0; id < tree_->size(); ++id) {
    for (std::size_t c : tree_->node(id).children) child_probs_[id + 1].push_back(tree_->node(c).prob);
  }
}

std::size_t TreeSimulator::locate(std::string_view key) const {
  auto id = tree_->find_key(key);
  if (!id) throw SupportError("prefix is not a node of the scenario tree");
  return *id;
}

void TreeSimulator::sample_below(std::size_t from, const DrawKey& key, std::vector<std::size_t>& out) const {
  out.clear();
  const std::size_t start = from == ScenarioTree::npos ? 0 : tree_->node(from).depth;
  if (from != ScenarioTree::npos && !(tree_->node(from).mu > 0.0)) {
    throw SupportError("prefix has zero probability");
  }
  KeyedStream stream(key);
  std::size_t cur = from;
  for (std::size_t t = start; t < instance().T; ++t) {
    const auto kids = tree_->children_of(cur);
    const auto& probs = child_probs_[cur == ScenarioTree::npos ? 0 : cur + 1];
    cur = kids[pick_branch(probs, stream.uniform_at(t))];
    out.push_back(cur);
  }
}

Trajectory TreeSimulator::complete(const Prefix& prefix, const DrawKey& key) const {
  if (prefix.dim() != dim()) throw SupportError("prefix dimension does not match the tree");
  const std::size_t from = prefix.empty() ? ScenarioTree::npos : locate(prefix.key());
  std::vector<std::size_t> ids;
  sample_below(from, key, ids);
  Prefix path = prefix;
  for (std::size_t id : ids) path.push_back(tree_->node(id).observation);
  return Trajectory(std::move(path), instance().T);
}

Item TreeSimulator::item(const Prefix& prefix) const {
  if (prefix.empty()) throw ContractViolation("the empty history has no item");
  return tree_->node(locate(prefix.key())).item;
}

std::vector<std::size_t> TreeSimulator::path_ids(const Trajectory& trajectory) const {
  const std::string key = trajectory.key();
  std::vector<std::size_t> ids(trajectory.horizon());
  for (std::size_t t = 1; t <= ids.size(); ++t) {
    ids[t - 1] = locate(std::string_view(key).substr(0, key_bytes(dim(), t)));
  }
  return ids;
}

std::vector<Item> TreeSimulator::readout(const Trajectory& trajectory) const {
  std::vector<Item> items;
  items.reserve(trajectory.horizon());
  for (std::size_t id : path_ids(trajectory)) items.push_back(tree_->node(id).item);
  return items;
}

std::optional<Block> TreeSimulator::block(const Prefix& prefix) const {
  if (tree_->encoding() != EncodingKind::MatchingOnline) return std::nullopt;
  return decode_online_block(prefix, tree_->degree_bound());
}

std::shared_ptr<TreeSimulator> tree_as_simulator(std::shared_ptr<const ScenarioTree> tree) {
  return std::make_shared<TreeSimulator>(std::move(tree));
}

ScenarioTree enumerate_tree(const Process& process, std::size_t node_cap) {
  std::vector<NodeSpec> specs;
  struct Pending {
    Prefix prefix;
    std::int64_t id;
  };
  std::vector<Pending> stack{{Prefix(process.dim()), -1}};
  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    if (cur.prefix.length() == process.instance().T) continue;
    for (auto& b : process.branches(cur.prefix)) {
      if (!(b.prob > 0.0)) continue;
      if (specs.size() >= node_cap) {
        throw CapacityError("process has more than " + std::to_string(node_cap) + " prefixes");
      }
      NodeSpec spec;
      spec.id = static_cast<std::int64_t>(specs.size());
      spec.parent_id = cur.id;
      spec.prob = b.prob;
      Prefix child = cur.prefix.extended(b.observation);
      spec.item = process.item(child);
      spec.observation = std::move(b.observation);
      specs.push_back(std::move(spec));
      stack.push_back({std::move(child), specs.back().id});
    }
  }
  return ScenarioTree::build(process.instance(), std::move(specs), node_cap);
}

ScenarioTree from_scenarios(InstanceSpec instance, std::vector<Scenario> scenarios, std::size_t node_cap) {
  if (scenarios.empty()) throw InstanceError("no scenarios");
  const std::size_t T = instance.T;
  double total = 0.0;
  std::optional<std::size_t> dim;
  for (const auto& s : scenarios) {
    if (!(s.prob >= 0.0)) throw InstanceError("negative scenario probability");
    if (s.observations.size() != T || s.items.size() != T) throw InstanceError("scenario length differs from T");
    for (const auto& o : s.observations) {
      if (!dim) dim = o.size();
      if (o.size() != *dim) throw InstanceError("observations must share one dimension");
    }
    total += s.prob;
  }
  if (std::fabs(total - 1.0) > kProbTol) throw InstanceError("scenario probabilities sum to " + std::to_string(total));

  struct Agg {
    std::int64_t parent;
    double mass = 0.0;
    Item item;
    std::vector<double> obs;
    std::vector<std::size_t> children;
  };
  std::vector<Agg> agg;
  std::unordered_map<std::string, std::size_t> by_key;
  std::vector<std::size_t> top;
  for (const auto& s : scenarios) {
    std::string key;
    std::int64_t parent = -1;
    for (std::size_t t = 0; t < T; ++t) {
      key += canonical_key(s.observations[t]);
      auto [it, fresh] = by_key.emplace(key, agg.size());
      if (fresh) {
        if (agg.size() >= node_cap) throw CapacityError("scenario tree exceeds the node cap");
        Item item = s.items[t];
        item.consumption = make_consumption(std::move(item.consumption));
        agg.push_back({parent, 0.0, std::move(item), s.observations[t], {}});
        if (parent < 0) top.push_back(it->second);
        else agg[static_cast<std::size_t>(parent)].children.push_back(it->second);
      } else {
        Item item = s.items[t];
        item.consumption = make_consumption(std::move(item.consumption));
        if (!(agg[it->second].item == item)) {
          throw InstanceError("scenarios sharing a prefix disagree on its reward or consumption");
        }
      }
      agg[it->second].mass += s.prob;
      parent = static_cast<std::int64_t>(it->second);
    }
  }
  auto cond = [&](std::size_t k, double parent_mass, std::size_t siblings) {
    return parent_mass > 0.0 ? agg[k].mass / parent_mass : 1.0 / static_cast<double>(siblings);
  };
  std::vector<NodeSpec> specs(agg.size());
  for (std::size_t k = 0; k < agg.size(); ++k) {
    specs[k].id = static_cast<std::int64_t>(k);
    specs[k].parent_id = agg[k].parent;
    specs[k].item = agg[k].item;
    specs[k].observation = agg[k].obs;
  }
  for (std::size_t k : top) specs[k].prob = cond(k, total, top.size());
  for (std::size_t p = 0; p < agg.size(); ++p) {
    for (std::size_t k : agg[p].children) specs[k].prob = cond(k, agg[p].mass, agg[p].children.size());
  }
  return ScenarioTree::build(std::move(instance), std::move(specs), node_cap);
}

ScenarioTree random_tree(std::uint64_t seed, const RandomTreeParams& p) {
  if (p.T == 0 || p.m == 0 || p.min_children == 0 || p.max_children < p.min_children) {
    throw ParameterError("invalid random tree parameters");
  }
  KeyedStream rng(DrawKey{seed, Stream::Generator, {0x7472ee, 0, 0}});
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_uniform(); };

  InstanceSpec inst;
  inst.T = p.T;
  inst.m = p.m;
  inst.L = std::min(p.L, p.m);
  inst.iota = p.binary_consumption ? 1.0 : p.iota;
  for (std::size_t i = 0; i < p.m; ++i) {
    double b = uniform(p.budget_lo, p.budget_hi);
    if (p.integral_budgets) b = std::floor(b);
    inst.budgets.push_back(b);
  }

  auto make_item = [&]() {
    Item item;
    item.reward = rng.next_uniform();
    if (rng.next_uniform() < p.consume_prob) {
      const std::size_t k = 1 + rng.next_below(inst.L);
      std::vector<std::uint32_t> pool(p.m);
      for (std::size_t i = 0; i < p.m; ++i) pool[i] = static_cast<std::uint32_t>(i);
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t pick = j + rng.next_below(p.m - j);
        std::swap(pool[j], pool[pick]);
        item.consumption.push_back({pool[j], p.binary_consumption ? 1.0 : uniform(inst.iota, 1.0)});
      }
    }
    return item;
  };

  std::vector<NodeSpec> specs;
  std::vector<std::int64_t> frontier{-1};
  std::size_t total = 0;
  for (std::size_t d = 0; d < p.T; ++d) {
    const std::size_t levels_left = p.T - d;
    std::vector<std::int64_t> next;
    for (std::size_t j = 0; j < frontier.size(); ++j) {
      const std::size_t rest = frontier.size() - j - 1;
      std::size_t c = p.min_children + rng.next_below(p.max_children - p.min_children + 1);
      while (c > 1) {
        const std::size_t next_size = next.size() + c + rest;
        if (total + next_size * levels_left <= p.max_nodes) break;
        --c;
      }
      std::vector<double> w(c);
      double sum = 0.0;
      for (std::size_t q = 0; q < c; ++q) {
        w[q] = uniform(0.2, 1.0);
        if (p.zero_prob_branches && q > 0 && rng.next_uniform() < 0.2) w[q] = 0.0;
        sum += w[q];
      }
      for (std::size_t q = 0; q < c; ++q) {
        NodeSpec spec;
        spec.id = static_cast<std::int64_t>(specs.size());
        spec.parent_id = frontier[j];
        spec.prob = w[q] / sum;
        spec.item = make_item();
        next.push_back(spec.id);
        specs.push_back(std::move(spec));
      }
    }
    total += next.size();
    frontier = std::move(next);
  }
  // Make the conditional probabilities of each sibling group sum to 1 exactly
  // enough for validation by letting the last sibling absorb the remainder.
  std::map<std::int64_t, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < specs.size(); ++k) groups[specs[k].parent_id].push_back(k);
  for (auto& [parent, members] : groups) {
    double s = 0.0;
    for (std::size_t q = 0; q + 1 < members.size(); ++q) s += specs[members[q]].prob;
    if (specs[members.back()].prob > 0.0 || members.size() == 1) specs[members.back()].prob = 1.0 - s;
  }
  const std::size_t cap = std::max<std::size_t>(p.max_nodes, specs.size());
  return ScenarioTree::build(std::move(inst), std::move(specs), cap);
}

}  // namespace onpack
