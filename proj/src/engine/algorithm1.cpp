#include "onpack/engine/algorithm1.hpp"

#include "onpack/engine/gradient.hpp"
#include "onpack/engine/sampling.hpp"
#include "onpack/errors.hpp"
#include "onpack/kernels/kernels.hpp"

namespace onpack {

Algorithm1Result run_algorithm1_explicit(const TreeSimulator& sim, const SolverConfig& config, bool keep_iterates) {
  if (config.K > 0) config.validate_basic();
  if (config.eta2 == 0 || config.eta2 > sim.instance().T) throw ParameterError("eta2 must lie in [1, T]");
  const ScenarioTree& tree = sim.tree();
  const std::size_t n = tree.size();
  const auto& kern = kernels::active();

  Algorithm1Result out;
  out.iterations = config.K;
  if (config.K == 0) return out;

  std::vector<double> x(n, 0.0), x_prev(n, 0.0), next(n), y(n), grad(n, 0.0);
  std::vector<double> sum(n, 0.0);
  std::vector<double> yuse;
  for (std::size_t k = 0; k < config.K; ++k) {
    const double beta = config.beta(k);
    for (std::size_t id = 0; id < n; ++id) y[id] = kernels::extrapolate_ref(beta, x[id], x_prev[id]);
    const IndexSample aleph = sample_index_set(config.master_seed, sim.instance().T, config.eta2, k);
    for (std::size_t id = 0; id < n; ++id) {
      const TreeNode& node = tree.node(id);
      if (!(node.mu > 0.0)) {
        grad[id] = 0.0;
        continue;
      }
      const DrawRecord rec = build_draw_record_tree(sim, id, k, aleph, config);
      yuse.resize(rec.uses.size());
      for (std::size_t u = 0; u < yuse.size(); ++u) yuse[u] = y[rec.uses[u].node];
      grad[id] = grad_from_record(node.item, rec, yuse, sim.instance(), config);
    }
    kern.momentum_step(x.data(), x_prev.data(), grad.data(), next.data(), n, beta, config.alpha);
    for (std::size_t id = 0; id < n; ++id) {
      if (!(tree.node(id).mu > 0.0)) next[id] = 0.0;
    }
    x_prev.swap(x);
    x.swap(next);
    for (std::size_t id = 0; id < n; ++id) sum[id] += x[id];
    if (keep_iterates) out.iterates.push_back(x);
  }
  out.average.resize(n);
  for (std::size_t id = 0; id < n; ++id) out.average[id] = sum[id] / static_cast<double>(config.K);
  return out;
}

}  // namespace onpack
