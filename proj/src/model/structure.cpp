#include "onpack/model/structure.hpp"

#include <algorithm>
#include <vector>

#include "onpack/errors.hpp"

namespace onpack {

StructureConstants derive_structure_constants(const ScenarioTree& tree) {
  if (tree.size() == 0) throw InstanceError("empty tree");
  const InstanceSpec& inst = tree.instance();
  StructureConstants out;

  std::size_t L = 0;
  double iota = 2.0;
  for (const auto& n : tree.nodes()) {
    L = std::max(L, n.item.consumption.size());
    for (const auto& e : n.item.consumption) iota = std::min(iota, e.value);
  }
  out.L = std::max<std::size_t>(L, 1);
  out.iota = iota <= 1.0 ? iota : inst.iota;

  std::vector<std::size_t> count(inst.m);
  std::vector<double> demand(inst.m);
  for (std::size_t leaf : tree.leaves()) {
    const auto path = tree.path_to(leaf);
    std::fill(count.begin(), count.end(), 0);
    std::fill(demand.begin(), demand.end(), 0.0);
    for (std::size_t id : path) {
      for (const auto& e : tree.node(id).item.consumption) {
        ++count[e.index];
        demand[e.index] += e.value;
      }
    }
    std::size_t saturated = 0;
    for (std::size_t i = 0; i < inst.m; ++i) {
      out.U_raw = std::max(out.U_raw, count[i]);
      if (demand[i] >= inst.budgets[i]) ++saturated;
    }
    out.V_raw = std::max(out.V_raw, saturated);
    // sum_t |a+(S^t) ∩ a+(S')| = sum over i in a+(S') of |T_i(S)|.
    for (std::size_t id : path) {
      std::size_t overlap = 0;
      for (const auto& e : tree.node(id).item.consumption) overlap += count[e.index];
      out.W = std::max(out.W, overlap);
    }
  }
  out.U = std::max<std::size_t>(out.U_raw, 2);
  out.V = std::max<std::size_t>(out.V_raw, 1);
  out.nu = inst.nu();
  InstanceSpec with_l = inst;
  with_l.L = out.L;
  out.lambda = with_l.lambda();
  out.V_bound = with_l.v_bound();
  return out;
}

}  // namespace onpack
