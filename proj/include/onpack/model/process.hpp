#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "onpack/model/instance.hpp"
#include "onpack/model/prefix.hpp"
#include "onpack/model/rng.hpp"

namespace onpack {

// The edges of one online node in a matching-with-online-nodes instance:
// periods t1..t2 (1-based, inclusive), their prefixes, and the offline node
// of each edge.
struct Block {
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  std::uint32_t online = 0;
  std::vector<std::uint32_t> offline;
  std::vector<Prefix> prefixes;
};

// Simulator and readout access to an information process.
//
// complete() must be a pure function of (prefix, key). Implementations draw
// the transition from length t to t+1 with KeyedStream(key).uniform_at(t), so
// two completions under one key agree on every period they both sample.
class Simulator {
 public:
  virtual ~Simulator() = default;

  virtual const InstanceSpec& instance() const = 0;
  virtual std::size_t dim() const = 0;

  // Completion of a prefix of length 0..T. Throws SupportError when the
  // prefix has zero probability.
  virtual Trajectory complete(const Prefix& prefix, const DrawKey& key) const = 0;

  // Reward and r.c.v. of the last period of a nonempty prefix.
  virtual Item item(const Prefix& prefix) const = 0;

  // Items of periods 1..T.
  virtual std::vector<Item> readout(const Trajectory& trajectory) const;

  // Block lookup; only matching-with-online-nodes encodings provide it.
  virtual std::optional<Block> block(const Prefix& prefix) const;
};

// Checked entry point: prefix length must lie in [1, T].
Trajectory simulate_completion(const Simulator& sim, const Prefix& prefix, const DrawKey& key);

struct Branch {
  std::vector<double> observation;
  double prob = 0.0;
};

// A process given by its one-step transition law, for instances too large to
// enumerate.
class Process {
 public:
  virtual ~Process() = default;
  virtual const InstanceSpec& instance() const = 0;
  virtual std::size_t dim() const = 0;
  // Possible next observations after `prefix` (length < T) with conditional
  // probabilities summing to 1.
  virtual std::vector<Branch> branches(const Prefix& prefix) const = 0;
  virtual Item item(const Prefix& prefix) const = 0;
  virtual std::optional<Block> block(const Prefix&) const { return std::nullopt; }
};

// Index of the branch selected by uniform u. Zero-probability branches are
// never selected. Shared by every simulator so that a tree enumerated from a
// process samples exactly like the process.
std::size_t pick_branch(std::span<const double> probs, double u);

class ProcessSimulator final : public Simulator {
 public:
  explicit ProcessSimulator(std::shared_ptr<const Process> process, bool check_support = true);

  const InstanceSpec& instance() const override { return process_->instance(); }
  std::size_t dim() const override { return process_->dim(); }
  Trajectory complete(const Prefix& prefix, const DrawKey& key) const override;
  Item item(const Prefix& prefix) const override;
  std::optional<Block> block(const Prefix& prefix) const override { return process_->block(prefix); }

  const Process& process() const { return *process_; }

 private:
  std::shared_ptr<const Process> process_;
  bool check_support_;
};

}  // namespace onpack
