#include "onpack/model/nrm.hpp"

#include <algorithm>
#include <string>

#include "onpack/errors.hpp"
#include "onpack/model/rng.hpp"

namespace onpack {

NrmProcess::NrmProcess(const NrmParams& p) : params_(p) {
  if (p.T == 0 || p.m == 0 || p.L == 0 || p.products == 0) throw ParameterError("NRM sizes must be positive");
  if (!(p.iota > 0.0 && p.iota <= 1.0)) throw ParameterError("iota must lie in (0, 1]");
  if (!(p.budget_ratio >= 0.0)) throw ParameterError("budget ratio must be nonnegative");
  if (!(p.stay >= 0.0 && p.stay <= 1.0)) throw ParameterError("stay probability must lie in [0, 1]");
  instance_.T = p.T;
  instance_.m = p.m;
  instance_.L = std::min(p.L, p.m);
  instance_.iota = p.iota;
  instance_.budgets.assign(p.m, p.budget_ratio * static_cast<double>(p.T));
  instance_.validate();

  KeyedStream rng(DrawKey{p.seed, Stream::Generator, {0x4e524d, p.T, p.m}});
  for (std::size_t j = 0; j < p.products; ++j) {
    NrmProduct prod;
    prod.fare = 0.1 + 0.9 * rng.next_uniform();
    const std::size_t k = 1 + rng.next_below(instance_.L);
    std::vector<std::uint32_t> pool(p.m);
    for (std::size_t i = 0; i < p.m; ++i) pool[i] = static_cast<std::uint32_t>(i);
    std::vector<SparseEntry> entries;
    for (std::size_t q = 0; q < k; ++q) {
      std::swap(pool[q], pool[q + rng.next_below(p.m - q)]);
      entries.push_back({pool[q], p.iota + (1.0 - p.iota) * rng.next_uniform()});
    }
    prod.consumption = make_consumption(std::move(entries));
    catalog_.push_back(std::move(prod));
  }
  for (int r = 0; r < 2; ++r) {
    arrival_[r] = r == 0 ? 0.5 + 0.4 * rng.next_uniform() : 0.2 + 0.4 * rng.next_uniform();
    double sum = 0.0;
    for (std::size_t j = 0; j < p.products; ++j) {
      weights_[r].push_back(0.1 + rng.next_uniform());
      sum += weights_[r].back();
    }
    for (auto& w : weights_[r]) w /= sum;
  }
}

std::vector<Branch> NrmProcess::branches(const Prefix& prefix) const {
  const std::size_t t = prefix.length();
  if (t >= params_.T) throw ContractViolation("complete trajectories have no branches");
  double regime_prob[2] = {0.5, 0.5};
  std::size_t arrivals = 0;
  if (t > 0) {
    const int r = static_cast<int>(prefix.observation(t)[0]);
    regime_prob[r] = params_.stay;
    regime_prob[1 - r] = 1.0 - params_.stay;
    for (std::size_t s = 1; s <= t; ++s) {
      if (prefix.observation(s)[1] >= 0.0) ++arrivals;
    }
  }
  const double damp = 1.0 - 0.5 * static_cast<double>(arrivals) / static_cast<double>(params_.T);
  std::vector<Branch> out;
  out.reserve(2 * (catalog_.size() + 1));
  for (int r = 0; r < 2; ++r) {
    const double p = arrival_[r] * damp;
    for (std::size_t j = 0; j < catalog_.size(); ++j) {
      out.push_back({{static_cast<double>(r), static_cast<double>(j)}, regime_prob[r] * p * weights_[r][j]});
    }
    out.push_back({{static_cast<double>(r), -1.0}, regime_prob[r] * (1.0 - p)});
  }
  return out;
}

Item NrmProcess::item(const Prefix& prefix) const {
  if (prefix.empty()) throw ContractViolation("the empty history has no item");
  const double j = prefix.observation(prefix.length())[1];
  if (j < 0.0) return {};
  const auto& prod = catalog_.at(static_cast<std::size_t>(j));
  return {prod.fare, prod.consumption};
}

std::size_t NrmProcess::enumeration_size() const {
  const std::size_t b = 2 * (catalog_.size() + 1);
  std::size_t total = 0;
  std::size_t level = 1;
  for (std::size_t t = 1; t <= params_.T; ++t) {
    if (level > SIZE_MAX / b) return SIZE_MAX;
    level *= b;
    if (total > SIZE_MAX - level) return SIZE_MAX;
    total += level;
  }
  return total;
}

NrmInstance generate_nrm(const NrmParams& params, NrmMode mode, std::size_t node_cap) {
  NrmInstance out;
  out.process = std::make_shared<const NrmProcess>(params);
  if (mode == NrmMode::Generative) {
    out.sim = std::make_shared<ProcessSimulator>(out.process);
    return out;
  }
  if (out.process->enumeration_size() > node_cap) {
    throw CapacityError("explicit NRM tree would have more than " + std::to_string(node_cap) + " nodes");
  }
  out.tree = std::make_shared<const ScenarioTree>(enumerate_tree(*out.process, node_cap));
  out.sim = tree_as_simulator(out.tree);
  return out;
}

}  // namespace onpack
