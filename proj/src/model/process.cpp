#include "onpack/model/process.hpp"

#include "onpack/errors.hpp"

namespace onpack {

std::vector<Item> Simulator::readout(const Trajectory& trajectory) const {
  std::vector<Item> items;
  items.reserve(trajectory.horizon());
  for (std::size_t t = 1; t <= trajectory.horizon(); ++t) items.push_back(item(trajectory.prefix(t)));
  return items;
}

std::optional<Block> Simulator::block(const Prefix&) const { return std::nullopt; }

Trajectory simulate_completion(const Simulator& sim, const Prefix& prefix, const DrawKey& key) {
  if (prefix.length() == 0 || prefix.length() > sim.instance().T) {
    throw ContractViolation("prefix length must lie in [1, T]");
  }
  return sim.complete(prefix, key);
}

std::size_t pick_branch(std::span<const double> probs, double u) {
  double total = 0.0;
  for (double p : probs) {
    if (p > 0.0) total += p;
  }
  if (!(total > 0.0)) throw SupportError("no branch with positive probability");
  const double target = u * total;
  double cum = 0.0;
  std::size_t last = probs.size();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!(probs[k] > 0.0)) continue;
    cum += probs[k];
    last = k;
    if (target < cum) return k;
  }
  return last;
}

ProcessSimulator::ProcessSimulator(std::shared_ptr<const Process> process, bool check_support)
    : process_(std::move(process)), check_support_(check_support) {
  if (!process_) throw ContractViolation("null process");
  process_->instance().validate();
}

Trajectory ProcessSimulator::complete(const Prefix& prefix, const DrawKey& key) const {
  const std::size_t T = instance().T;
  if (prefix.dim() != dim() || prefix.length() > T) throw SupportError("prefix does not match the process");
  if (check_support_) {
    Prefix walk(dim());
    for (std::size_t t = 1; t <= prefix.length(); ++t) {
      const auto obs = prefix.observation(t);
      bool found = false;
      for (const auto& b : process_->branches(walk)) {
        if (b.prob > 0.0 && std::equal(b.observation.begin(), b.observation.end(), obs.begin(), obs.end())) {
          found = true;
          break;
        }
      }
      if (!found) throw SupportError("prefix is not in the support of the process");
      walk.push_back(obs);
    }
  }
  KeyedStream stream(key);
  Prefix path = prefix;
  std::vector<double> probs;
  for (std::size_t t = prefix.length(); t < T; ++t) {
    const auto branches = process_->branches(path);
    probs.clear();
    for (const auto& b : branches) probs.push_back(b.prob);
    path.push_back(branches[pick_branch(probs, stream.uniform_at(t))].observation);
  }
  return Trajectory(std::move(path), T);
}

Item ProcessSimulator::item(const Prefix& prefix) const {
  if (prefix.empty()) throw ContractViolation("the empty history has no item");
  return process_->item(prefix);
}

}  // namespace onpack
