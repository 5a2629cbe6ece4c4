#include "support/fixtures.hpp"

#include <stdexcept>

#include "onpack/cli.hpp"

namespace onpack::fixtures {

std::shared_ptr<ScenarioTree> one_node_tree(double z, double a, double b, double iota) {
  InstanceSpec spec;
  spec.T = 1;
  spec.m = 1;
  spec.budgets = {b};
  spec.L = 1;
  spec.iota = iota;
  std::vector<NodeSpec> nodes = {{0, -1, 1.0, Item{z, make_consumption({{0, a}})}, std::nullopt}};
  return std::make_shared<ScenarioTree>(ScenarioTree::build(spec, std::move(nodes)));
}

std::shared_ptr<ScenarioTree> two_period() { return std::make_shared<ScenarioTree>(cli::two_period_tree()); }

std::vector<double> random_solution(const ScenarioTree& tree, std::uint64_t seed, double lo, double hi) {
  TestRng rng(seed, 0x501);
  std::vector<double> x(tree.size());
  for (std::size_t id = 0; id < x.size(); ++id) {
    const double v = rng.uniform(lo, hi);
    x[id] = tree.node(id).mu > 0.0 ? v : 0.0;
  }
  return x;
}

ScenarioTree random_dp_tree(std::uint64_t seed, std::size_t T, std::size_t m, std::size_t max_nodes) {
  RandomTreeParams p;
  p.T = T;
  p.m = m;
  p.L = std::min<std::size_t>(m, 2);
  p.iota = 1.0;
  p.min_children = 1;
  p.max_children = 2;
  p.max_nodes = max_nodes;
  p.binary_consumption = true;
  p.integral_budgets = true;
  p.budget_lo = 1.0;
  p.budget_hi = static_cast<double>(std::max<std::size_t>(2, T / 2));
  return random_tree(seed, p);
}

double brute_force_pack(const ScenarioTree& tree) {
  const std::size_t n = tree.size();
  if (n > 20) throw std::invalid_argument("tree too large for enumeration");
  const std::size_t m = tree.instance().m;
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool ok = true;
    for (std::size_t leaf : tree.leaves()) {
      std::vector<double> used(m, 0.0);
      for (std::size_t id : tree.path_to(leaf)) {
        if (!((mask >> id) & 1)) continue;
        for (const auto& e : tree.node(id).item.consumption) used[e.index] += e.value;
      }
      for (std::size_t i = 0; i < m; ++i) ok = ok && used[i] <= tree.instance().budgets[i] + 1e-9;
      if (!ok) break;
    }
    if (!ok) continue;
    double v = 0.0;
    for (std::size_t id = 0; id < n; ++id) {
      if ((mask >> id) & 1) v += tree.node(id).mu * tree.node(id).item.reward;
    }
    best = std::max(best, v);
  }
  return best;
}

PairBlockProcess::PairBlockProcess(std::size_t T) {
  spec_.T = T;
  if (T == 0 || T % 2 != 0) throw std::invalid_argument("pair-block horizon must be even");
  spec_.m = T;
  spec_.budgets.assign(T, 1.0);
  spec_.L = 1;
  spec_.iota = 1.0;
  spec_.U = 2;
}

std::vector<Branch> PairBlockProcess::branches(const Prefix& prefix) const {
  const std::size_t t = prefix.length() + 1;
  if (t % 2 == 1) return {{{0.0}, 0.5}, {{1.0}, 0.5}};
  return {{{prefix.observation(t - 1)[0]}, 1.0}};
}

Item PairBlockProcess::item(const Prefix& prefix) const {
  const std::size_t t = prefix.length();
  const auto side = static_cast<std::uint32_t>(prefix.observation(t)[0]);
  const auto block = static_cast<std::uint32_t>((t - 1) / 2);
  return Item{0.5, make_consumption({{2 * block + side, 1.0}})};
}

}  // namespace onpack::fixtures
