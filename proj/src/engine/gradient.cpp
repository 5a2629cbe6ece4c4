#include "onpack/engine/gradient.hpp"

#include <algorithm>
#include <tuple>

#include "onpack/errors.hpp"
#include "onpack/kernels/kernels.hpp"

namespace onpack {

namespace {

void sort_uses(std::vector<DrawUse>& uses) {
  std::sort(uses.begin(), uses.end(), [](const DrawUse& a, const DrawUse& b) {
    return std::tie(a.slot, a.draw, a.t) < std::tie(b.slot, b.draw, b.t);
  });
}

}  // namespace

DrawKey conditional_draw_key(std::uint64_t seed, std::size_t k, std::string_view key, std::size_t j) {
  return DrawKey{seed, Stream::Trajectory, {k, key_hash(key), j}};
}

DrawRecord build_draw_record(const Simulator& sim, const Prefix& prefix, const Item& item, std::size_t k,
                             const IndexSample& aleph, const SolverConfig& config, const NodeInterner& intern,
                             MemoCounters* counters, bool keep_trajectories) {
  const std::size_t T = sim.instance().T;
  const std::size_t dim = sim.dim();
  const std::string pkey = prefix.key();
  DrawRecord rec;
  rec.eta1 = config.eta1;
  std::vector<std::uint32_t> node_at(T + 1);
  std::vector<bool> resolved(T + 1);
  for (std::size_t j = 1; j <= config.eta1; ++j) {
    Trajectory traj = sim.complete(prefix, conditional_draw_key(config.master_seed, k, pkey, j));
    const std::vector<Item> items = sim.readout(traj);
    if (counters) {
      ++counters->sim_calls;
      counters->oracle_calls += items.size();
    }
    const std::string tkey = traj.key();
    std::fill(resolved.begin(), resolved.end(), false);
    for (std::size_t s = 0; s < item.consumption.size(); ++s) {
      const std::uint32_t i = item.consumption[s].index;
      for (std::uint32_t t : aleph.indices) {
        const double a = items[t - 1].consumption_of(i);
        if (!(a > 0.0)) continue;
        if (!resolved[t]) {
          node_at[t] = intern(std::string_view(tkey).substr(0, key_bytes(dim, t)), t, items[t - 1]);
          resolved[t] = true;
        }
        rec.uses.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(j - 1), t, a, node_at[t]});
      }
    }
    if (keep_trajectories) rec.trajectories.push_back(std::move(traj));
  }
  sort_uses(rec.uses);
  if (counters) ++counters->draw_sets;
  return rec;
}

DrawRecord build_draw_record_tree(const TreeSimulator& sim, std::size_t node, std::size_t k,
                                  const IndexSample& aleph, const SolverConfig& config) {
  const ScenarioTree& tree = sim.tree();
  const TreeNode& n = tree.node(node);
  const std::vector<std::size_t> above = tree.path_to(node);
  const std::size_t depth = n.depth;
  DrawRecord rec;
  rec.eta1 = config.eta1;
  std::vector<std::size_t> below;
  for (std::size_t j = 1; j <= config.eta1; ++j) {
    sim.sample_below(node, conditional_draw_key(config.master_seed, k, n.key, j), below);
    for (std::size_t s = 0; s < n.item.consumption.size(); ++s) {
      const std::uint32_t i = n.item.consumption[s].index;
      for (std::uint32_t t : aleph.indices) {
        const std::size_t id = t <= depth ? above[t - 1] : below[t - depth - 1];
        const double a = tree.node(id).item.consumption_of(i);
        if (!(a > 0.0)) continue;
        rec.uses.push_back(
            {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(j - 1), t, a, static_cast<std::uint32_t>(id)});
      }
    }
  }
  sort_uses(rec.uses);
  return rec;
}

double grad_from_record(const Item& item, const DrawRecord& record, std::span<const double> y,
                        const InstanceSpec& instance, const SolverConfig& config) {
  if (y.size() != record.uses.size()) throw ContractViolation("one Y value per draw use is required");
  for (double v : y) {
    if (!(v >= -1.0 && v <= 2.0)) throw ContractViolation("evaluation outside [-1, 2]");
  }
  const double scale = static_cast<double>(instance.T) / static_cast<double>(config.eta2);
  const double eta1 = static_cast<double>(record.eta1);
  const auto& uses = record.uses;
  std::size_t u = 0;
  double pen = 0.0;
  for (std::size_t s = 0; s < item.consumption.size(); ++s) {
    const auto& e = item.consumption[s];
    const double b = instance.budgets[e.index];
    double sum = 0.0;
    for (std::uint32_t j = 0; j < record.eta1; ++j) {
      double acc = 0.0;
      for (; u < uses.size() && uses[u].slot == s && uses[u].draw == j; ++u) acc += uses[u].a * y[u];
      sum += kernels::huber_deriv_ref(scale * acc - b, config.theta);
    }
    pen += e.value * (sum / eta1);
  }
  if (u != uses.size()) throw InvariantError("draw record does not match the item");
  return item.reward - (2.0 / instance.iota) * pen;
}

const std::vector<Trajectory>& conditional_draws(const Simulator& sim, MemoTable& memo, const Prefix& prefix,
                                                 std::size_t k) {
  const std::string key = prefix.key();
  const std::uint32_t id = memo.intern(key, prefix.length());
  DrawRecord* rec = memo.draws(id, k);
  if (rec && rec->trajectories.size() == rec->eta1) return rec->trajectories;
  if (prefix.empty()) throw ContractViolation("conditional draws need a nonempty prefix");
  if (!memo.item(id)) {
    memo.set_item(id, sim.item(prefix));
    ++memo.counters().oracle_calls;
  }
  const Item item = *memo.item(id);
  const IndexSample& aleph = memo.index_sample(k, sim.instance().T);
  NodeInterner intern = [&memo](std::string_view key, std::size_t length, const Item& it) {
    const std::uint32_t nid = memo.intern(key, length);
    memo.set_item(nid, it);
    return nid;
  };
  DrawRecord built = build_draw_record(sim, prefix, item, k, aleph, memo.config(), intern, &memo.counters(), true);
  return memo.store_draws(id, k, std::move(built)).trajectories;
}

double stochastic_grad_component(const std::function<double(const Prefix&)>& eval, const Simulator& sim,
                                 MemoTable& memo, const Prefix& prefix, std::size_t k) {
  conditional_draws(sim, memo, prefix, k);
  const std::uint32_t id = *memo.find(prefix.key());
  const DrawRecord& rec = *memo.draws(id, k);
  std::vector<double> y(rec.uses.size());
  for (std::size_t u = 0; u < y.size(); ++u) {
    const std::uint32_t nid = rec.uses[u].node;
    y[u] = eval(Prefix::from_key(sim.dim(), memo.key(nid)));
  }
  return grad_from_record(*memo.item(id), rec, y, sim.instance(), memo.config());
}

}  // namespace onpack
