#include "onpack/model/encodings.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "onpack/errors.hpp"
#include "onpack/model/rng.hpp"

namespace onpack {

namespace {

double checked_prob_sum(const auto& scenarios) {
  double total = 0.0;
  for (const auto& s : scenarios) total += s.first;
  if (std::fabs(total - 1.0) > 1e-9) throw InstanceError("scenario probabilities must sum to 1");
  return total;
}

EncodedInstance finish(ScenarioTree tree, EncodingKind kind, std::size_t delta) {
  tree.set_encoding(kind, delta);
  auto shared = std::make_shared<const ScenarioTree>(std::move(tree));
  return {shared, tree_as_simulator(shared)};
}

std::vector<double> normalized_weights(KeyedStream& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = 0.2 + rng.next_uniform();
    sum += x;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    w[k] /= sum;
    acc += w[k];
  }
  w[n - 1] = 1.0 - acc;
  return w;
}

}  // namespace

// ---- IS ---------------------------------------------------------------------

EncodedInstance encode_is(const IsProcess& p) {
  if (p.n == 0 || p.delta == 0) throw InstanceError("IS process needs n >= 1 and delta >= 1");
  if (p.side.size() != p.n) throw InstanceError("partite membership must be given for every node");
  checked_prob_sum(p.scenarios);
  InstanceSpec inst;
  inst.T = p.n;
  inst.m = std::max<std::size_t>(p.delta * p.n / 2, 1);
  inst.budgets.assign(inst.m, 1.0);
  inst.L = p.delta;
  inst.iota = 1.0;
  inst.U = 2;
  inst.W = 2 * p.delta;

  std::vector<Scenario> scenarios;
  for (const auto& [prob, g] : p.scenarios) {
    if (g.weight.size() != p.n) throw InstanceError("IS scenario needs one weight per node");
    auto edges = g.edges;
    for (auto& e : edges) {
      if (e.first >= p.n || e.second >= p.n || e.first == e.second) throw InstanceError("invalid IS edge");
      if (p.side[e.first] == p.side[e.second]) throw InstanceError("IS edge inside one partite");
      if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) throw InstanceError("duplicate IS edge");
    if (edges.size() > inst.m) throw InstanceError("more edges than the degree bound allows");
    std::vector<std::vector<std::uint32_t>> incident(p.n);
    for (std::uint32_t r = 0; r < edges.size(); ++r) {
      incident[edges[r].first].push_back(r);
      incident[edges[r].second].push_back(r);
    }
    Scenario s;
    s.prob = prob;
    for (std::size_t t = 0; t < p.n; ++t) {
      if (incident[t].size() > p.delta) throw InstanceError("degree bound violated at node " + std::to_string(t));
      std::vector<double> obs{static_cast<double>(p.side[t]), g.weight[t]};
      Item item;
      item.reward = g.weight[t];
      for (std::size_t k = 0; k < p.delta; ++k) {
        if (k < incident[t].size()) {
          obs.push_back(incident[t][k]);
          item.consumption.push_back({incident[t][k], 1.0});
        } else {
          obs.push_back(-1.0);
        }
      }
      s.observations.push_back(std::move(obs));
      s.items.push_back(std::move(item));
    }
    scenarios.push_back(std::move(s));
  }
  return finish(from_scenarios(std::move(inst), std::move(scenarios)), EncodingKind::IndependentSet, p.delta);
}

int is_partite_of(const Prefix& prefix) {
  if (prefix.empty()) throw ContractViolation("empty prefix has no partite");
  const double side = prefix.observation(prefix.length())[0];
  if (side != 0.0 && side != 1.0) throw ContractViolation("prefix is not IS-encoded");
  return static_cast<int>(side);
}

bool is_traditional_measurable(const ScenarioTree& tree) {
  // For every node where resource i first appears on its path, all leaves
  // below must agree on the whole future sequence of a_i.
  std::vector<std::set<std::uint32_t>> seen(tree.size());
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const auto& n = tree.node(id);
    if (n.parent >= 0) seen[id] = seen[static_cast<std::size_t>(n.parent)];
    std::vector<std::uint32_t> fresh;
    for (const auto& e : n.item.consumption) {
      if (seen[id].insert(e.index).second) fresh.push_back(e.index);
    }
    if (fresh.empty()) continue;
    for (std::uint32_t i : fresh) {
      std::optional<std::vector<std::pair<std::size_t, double>>> reference;
      std::vector<std::pair<std::size_t, std::vector<std::pair<std::size_t, double>>>> stack{{id, {}}};
      while (!stack.empty()) {
        auto [cur, seq] = std::move(stack.back());
        stack.pop_back();
        const auto& cn = tree.node(cur);
        if (cur != id) {
          const double a = cn.item.consumption_of(i);
          if (a != 0.0) seq.emplace_back(cn.depth, a);
        }
        if (cn.children.empty()) {
          if (!reference) reference = seq;
          else if (*reference != seq) return false;
          continue;
        }
        for (std::size_t c : cn.children) stack.emplace_back(c, seq);
      }
    }
  }
  return true;
}

// ---- MWM --------------------------------------------------------------------

EncodedInstance encode_mwm(const MwmProcess& p) {
  if (p.n < 2 || p.delta == 0) throw InstanceError("matching process needs n >= 2 and delta >= 1");
  checked_prob_sum(p.scenarios);
  InstanceSpec inst;
  inst.T = std::max<std::size_t>(p.delta * p.n / 2, 1);
  inst.m = p.n;
  inst.budgets.assign(inst.m, 1.0);
  inst.L = 2;
  inst.iota = 1.0;
  inst.U = std::max<std::size_t>(p.delta, 2);
  inst.W = 2 * p.delta;

  std::vector<Scenario> scenarios;
  for (const auto& [prob, edges] : p.scenarios) {
    if (edges.size() > inst.T) throw InstanceError("more edges than periods");
    std::vector<std::size_t> degree(p.n, 0);
    Scenario s;
    s.prob = prob;
    for (std::size_t t = 0; t < inst.T; ++t) {
      if (t < edges.size()) {
        const auto& e = edges[t];
        if (e.u >= p.n || e.v >= p.n || e.u == e.v) throw InstanceError("edge endpoints not identified");
        if (!(e.w >= 0.0 && e.w <= 1.0)) throw InstanceError("edge weight outside [0, 1]");
        if (++degree[e.u] > p.delta || ++degree[e.v] > p.delta) throw InstanceError("degree bound violated");
        s.observations.push_back({1.0, static_cast<double>(e.u), static_cast<double>(e.v), e.w});
        s.items.push_back({e.w, make_consumption({{e.u, 1.0}, {e.v, 1.0}})});
      } else {
        s.observations.push_back({0.0, -1.0, -1.0, 0.0});
        s.items.push_back({});
      }
    }
    scenarios.push_back(std::move(s));
  }
  return finish(from_scenarios(std::move(inst), std::move(scenarios)), EncodingKind::Matching, p.delta);
}

// ---- MMO --------------------------------------------------------------------

EncodedInstance encode_mmo(const MmoProcess& p) {
  const std::size_t n = p.n_offline + p.n_online;
  if (p.n_offline == 0 || p.n_online == 0 || p.delta == 0) throw InstanceError("MMO process needs both partites");
  checked_prob_sum(p.scenarios);
  InstanceSpec inst;
  inst.T = std::max<std::size_t>(p.delta * n / 2, 1);
  inst.m = n;
  inst.budgets.assign(inst.m, 1.0);
  inst.L = 2;
  inst.iota = 1.0;
  inst.U = std::max<std::size_t>(p.delta, 2);
  inst.W = 2 * p.delta;

  std::vector<Scenario> scenarios;
  for (const auto& [prob, lists] : p.scenarios) {
    if (lists.size() != p.n_online) throw InstanceError("one neighbour list per online node required");
    std::vector<std::size_t> degree(p.n_offline, 0);
    Scenario s;
    s.prob = prob;
    std::size_t t = 0;
    for (std::uint32_t o = 0; o < lists.size(); ++o) {
      auto nbrs = lists[o];
      std::sort(nbrs.begin(), nbrs.end());
      if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end()) throw InstanceError("duplicate MMO edge");
      if (nbrs.size() > p.delta) throw InstanceError("online degree exceeds delta");
      if (nbrs.empty()) continue;
      const std::size_t t1 = t + 1;
      const std::size_t t2 = t + nbrs.size();
      if (t2 > inst.T) throw InstanceError("more edges than periods");
      for (std::uint32_t j : nbrs) {
        if (j >= p.n_offline) throw InstanceError("offline node out of range");
        if (++degree[j] > p.delta) throw InstanceError("offline degree exceeds delta");
        std::vector<double> obs{1.0, static_cast<double>(j), static_cast<double>(o), static_cast<double>(t1),
                                static_cast<double>(t2)};
        for (std::size_t k = 0; k < p.delta; ++k) obs.push_back(k < nbrs.size() ? nbrs[k] : -1.0);
        s.observations.push_back(std::move(obs));
        s.items.push_back({1.0, make_consumption({{j, 1.0}, {static_cast<std::uint32_t>(p.n_offline + o), 1.0}})});
        ++t;
      }
    }
    for (; t < inst.T; ++t) {
      std::vector<double> obs{0.0, -1.0, -1.0, 0.0, 0.0};
      obs.resize(5 + p.delta, -1.0);
      s.observations.push_back(std::move(obs));
      s.items.push_back({});
    }
    scenarios.push_back(std::move(s));
  }
  return finish(from_scenarios(std::move(inst), std::move(scenarios)), EncodingKind::MatchingOnline, p.delta);
}

std::optional<Block> decode_online_block(const Prefix& prefix, std::size_t delta) {
  if (prefix.empty()) throw ContractViolation("empty prefix has no block");
  if (prefix.dim() != 5 + delta) throw InstanceError("prefix is not encoded for matching with online nodes");
  const std::size_t t = prefix.length();
  const auto obs = prefix.observation(t);
  if (obs[0] == 0.0) return std::nullopt;
  Block b;
  b.online = static_cast<std::uint32_t>(obs[2]);
  b.t1 = static_cast<std::size_t>(obs[3]);
  b.t2 = static_cast<std::size_t>(obs[4]);
  if (b.t1 < 1 || b.t1 > t || b.t2 < t || b.t2 - b.t1 + 1 > delta) throw InstanceError("block ordering violated");
  Prefix walk = prefix.truncated(b.t1 - 1);
  for (std::size_t s = b.t1; s <= b.t2; ++s) {
    const double j = obs[5 + (s - b.t1)];
    if (j < 0.0) throw InstanceError("block shorter than its window");
    std::vector<double> step(obs.begin(), obs.end());
    step[1] = j;
    walk.push_back(step);
    b.offline.push_back(static_cast<std::uint32_t>(j));
    b.prefixes.push_back(walk);
  }
  if (!(b.prefixes[t - b.t1] == prefix)) throw InstanceError("block ordering violated");
  return b;
}

// ---- generators -------------------------------------------------------------

IsProcess random_is_process(std::uint64_t seed, std::size_t n, std::size_t delta, std::size_t n_scenarios,
                            double edge_prob) {
  if (n == 0 || delta == 0 || n_scenarios == 0) throw ParameterError("invalid IS generator parameters");
  KeyedStream rng(DrawKey{seed, Stream::Generator, {0x15, n, delta}});
  IsProcess p;
  p.n = n;
  p.delta = delta;
  for (std::size_t t = 0; t < n; ++t) p.side.push_back(rng.next_uniform() < 0.5 ? 0 : 1);
  // Keep both partites nonempty when possible.
  if (n >= 2 && std::all_of(p.side.begin(), p.side.end(), [&](int s) { return s == p.side[0]; })) {
    p.side[n - 1] = 1 - p.side[0];
  }
  const auto probs = normalized_weights(rng, n_scenarios);
  for (std::size_t k = 0; k < n_scenarios; ++k) {
    IsGraph g;
    for (std::size_t t = 0; t < n; ++t) g.weight.push_back(rng.next_uniform());
    std::vector<std::size_t> degree(n, 0);
    for (std::uint32_t u = 0; u < n; ++u) {
      for (std::uint32_t v = u + 1; v < n; ++v) {
        if (p.side[u] == p.side[v] || degree[u] >= delta || degree[v] >= delta) continue;
        if (rng.next_uniform() < edge_prob) {
          g.edges.emplace_back(u, v);
          ++degree[u];
          ++degree[v];
        }
      }
    }
    p.scenarios.emplace_back(probs[k], std::move(g));
  }
  return p;
}

MwmProcess random_mwm_process(std::uint64_t seed, std::size_t n, std::size_t delta, std::size_t n_scenarios) {
  if (n < 2 || delta == 0 || n_scenarios == 0) throw ParameterError("invalid matching generator parameters");
  KeyedStream rng(DrawKey{seed, Stream::Generator, {0x3a3, n, delta}});
  MwmProcess p;
  p.n = n;
  p.delta = delta;
  const std::size_t T = std::max<std::size_t>(delta * n / 2, 1);
  const std::size_t half = n / 2;
  const auto probs = normalized_weights(rng, n_scenarios);
  for (std::size_t k = 0; k < n_scenarios; ++k) {
    std::vector<WeightedEdge> candidates;
    for (std::uint32_t u = 0; u < half; ++u) {
      for (std::uint32_t v = static_cast<std::uint32_t>(half); v < n; ++v) candidates.push_back({u, v, 0.0});
    }
    for (std::size_t q = candidates.size(); q > 1; --q) std::swap(candidates[q - 1], candidates[rng.next_below(q)]);
    std::vector<std::size_t> degree(n, 0);
    std::vector<WeightedEdge> edges;
    const std::size_t target = 1 + rng.next_below(T);
    for (auto e : candidates) {
      if (edges.size() >= target) break;
      if (degree[e.u] >= delta || degree[e.v] >= delta) continue;
      ++degree[e.u];
      ++degree[e.v];
      e.w = rng.next_uniform();
      edges.push_back(e);
    }
    p.scenarios.emplace_back(probs[k], std::move(edges));
  }
  return p;
}

MmoProcess random_mmo_process(std::uint64_t seed, std::size_t n_offline, std::size_t n_online, std::size_t delta,
                              std::size_t n_scenarios) {
  if (n_offline == 0 || n_online == 0 || delta == 0 || n_scenarios == 0) {
    throw ParameterError("invalid online matching generator parameters");
  }
  KeyedStream rng(DrawKey{seed, Stream::Generator, {0x33d, n_offline, n_online}});
  MmoProcess p;
  p.n_offline = n_offline;
  p.n_online = n_online;
  p.delta = delta;
  const auto probs = normalized_weights(rng, n_scenarios);
  for (std::size_t k = 0; k < n_scenarios; ++k) {
    std::vector<std::size_t> degree(n_offline, 0);
    std::vector<std::vector<std::uint32_t>> lists(n_online);
    for (std::size_t o = 0; o < n_online; ++o) {
      for (std::uint32_t j = 0; j < n_offline; ++j) {
        if (lists[o].size() >= delta || degree[j] >= delta) continue;
        if (rng.next_uniform() < 0.5) {
          lists[o].push_back(j);
          ++degree[j];
        }
      }
    }
    p.scenarios.emplace_back(probs[k], std::move(lists));
  }
  return p;
}

}  // namespace onpack
