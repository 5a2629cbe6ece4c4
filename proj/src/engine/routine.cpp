#include "onpack/engine/routine.hpp"

#include <vector>

#include "onpack/engine/gradient.hpp"
#include "onpack/errors.hpp"
#include "onpack/kernels/kernels.hpp"

namespace onpack {

namespace {

struct Frame {
  std::uint32_t id;
  std::size_t k;
  bool expanded;
};

std::uint32_t intern_prefix(const Simulator& sim, MemoTable& memo, const Prefix& prefix) {
  if (prefix.empty()) throw ContractViolation("the empty history has no decision");
  if (prefix.length() > sim.instance().T) throw ContractViolation("prefix longer than the horizon");
  const std::uint32_t id = memo.intern(prefix.key(), prefix.length());
  if (!memo.item(id)) {
    memo.set_item(id, sim.item(prefix));
    ++memo.counters().oracle_calls;
  }
  return id;
}

// Ensures the draw record of (id, g) exists; returns it.
DrawRecord& draws_for(const Simulator& sim, MemoTable& memo, std::uint32_t id, std::size_t g) {
  if (DrawRecord* rec = memo.draws(id, g)) return *rec;
  const Prefix prefix = Prefix::from_key(sim.dim(), memo.key(id));
  const IndexSample& aleph = memo.index_sample(g, sim.instance().T);
  NodeInterner intern = [&memo](std::string_view key, std::size_t length, const Item& it) {
    const std::uint32_t nid = memo.intern(key, length);
    memo.set_item(nid, it);
    return nid;
  };
  return memo.store_draws(id, g,
                          build_draw_record(sim, prefix, *memo.item(id), g, aleph, memo.config(), intern,
                                            &memo.counters(), false));
}

}  // namespace

double routine_value(const Simulator& sim, MemoTable& memo, std::uint32_t id, std::size_t k) {
  if (memo.has(id, k)) {
    if (k > 0) ++memo.counters().hits;
    return memo.get(id, k);
  }
  const SolverConfig& cfg = memo.config();
  std::vector<Frame> stack{{id, k, false}};
  while (!stack.empty()) {
    const Frame top = stack.back();
    if (memo.has(top.id, top.k)) {
      // A duplicate pushed before its first copy was evaluated.
      ++memo.counters().hits;
      stack.pop_back();
      continue;
    }
    const std::size_t g = top.k - 1;
    if (!top.expanded) {
      stack.back().expanded = true;
      ++memo.counters().misses;
      const DrawRecord& rec = draws_for(sim, memo, top.id, g);
      if (g >= 1) {
        auto need = [&](std::uint32_t nid) {
          if (memo.has(nid, g)) {
            ++memo.counters().hits;
          } else {
            stack.push_back({nid, g, false});
          }
        };
        need(top.id);
        for (const DrawUse& use : rec.uses) need(use.node);
      }
      continue;
    }
    // Every value at levels g and g-1 this frame reads is now available.
    const DrawRecord& rec = *memo.draws(top.id, g);
    const double beta = cfg.beta(g);
    std::vector<double> y(rec.uses.size());
    for (std::size_t u = 0; u < y.size(); ++u) {
      const std::uint32_t nid = rec.uses[u].node;
      const double prev = g >= 1 ? memo.get(nid, g - 1) : 0.0;
      y[u] = kernels::extrapolate_ref(beta, memo.get(nid, g), prev);
    }
    const double grad = grad_from_record(*memo.item(top.id), rec, y, sim.instance(), cfg);
    const double x = memo.get(top.id, g);
    const double x_prev = g >= 1 ? memo.get(top.id, g - 1) : 0.0;
    memo.put(top.id, top.k, kernels::momentum_ref(x, x_prev, grad, beta, cfg.alpha));
    memo.release_draws(top.id, g);
    stack.pop_back();
  }
  return memo.get(id, k);
}

double recursive_R(const Simulator& sim, MemoTable& memo, const Prefix& prefix, std::int64_t k) {
  if (k <= 0) return 0.0;
  return routine_value(sim, memo, intern_prefix(sim, memo, prefix), static_cast<std::size_t>(k));
}

double decide_pen(const Simulator& sim, MemoTable& memo, const Prefix& prefix) {
  const std::size_t K = memo.config().K;
  if (K == 0) throw ParameterError("K must be at least 1");
  const std::uint32_t id = intern_prefix(sim, memo, prefix);
  routine_value(sim, memo, id, K);
  double sum = 0.0;
  for (std::size_t k = 1; k <= K; ++k) sum += memo.get(id, k);
  return sum / static_cast<double>(K);
}

}  // namespace onpack
