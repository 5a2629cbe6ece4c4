#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "onpack/model/process.hpp"
#include "onpack/model/scenario_tree.hpp"

namespace onpack {

// Network revenue management with Markov-modulated, history-dependent demand.
//
// Two demand regimes follow a Markov chain (stay probability `stay`). In each
// period a customer arrives with a probability that depends on the regime and
// shrinks with the number of arrivals so far; an arriving customer requests
// one product of the catalog with regime-dependent weights. Observation:
// [regime, product] with product = -1 for a no-show.
struct NrmParams {
  std::uint64_t seed = 1;
  std::size_t T = 4;
  std::size_t m = 2;
  std::size_t L = 2;
  double iota = 0.5;
  double budget_ratio = 0.3;
  std::size_t products = 2;
  double stay = 0.8;
};

struct NrmProduct {
  double fare = 0.0;
  ConsumptionVector consumption;
};

class NrmProcess final : public Process {
 public:
  explicit NrmProcess(const NrmParams& params);

  const InstanceSpec& instance() const override { return instance_; }
  std::size_t dim() const override { return 2; }
  std::vector<Branch> branches(const Prefix& prefix) const override;
  Item item(const Prefix& prefix) const override;

  const std::vector<NrmProduct>& catalog() const { return catalog_; }
  // Number of prefixes of a full enumeration.
  std::size_t enumeration_size() const;

 private:
  NrmParams params_;
  InstanceSpec instance_;
  std::vector<NrmProduct> catalog_;
  double arrival_[2] = {0.0, 0.0};
  std::vector<double> weights_[2];
};

enum class NrmMode { Explicit, Generative };

struct NrmInstance {
  std::shared_ptr<const NrmProcess> process;
  std::shared_ptr<const ScenarioTree> tree;  // explicit mode only
  std::shared_ptr<Simulator> sim;
};

// Explicit mode enumerates the tree and throws CapacityError above node_cap.
NrmInstance generate_nrm(const NrmParams& params, NrmMode mode,
                         std::size_t node_cap = ScenarioTree::kDefaultNodeCap);

}  // namespace onpack
