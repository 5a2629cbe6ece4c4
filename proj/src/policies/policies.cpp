#include "onpack/policies.hpp"

#include <algorithm>

#include "onpack/engine/routine.hpp"
#include "onpack/errors.hpp"
#include "onpack/model/encodings.hpp"

namespace onpack {

double feas_step(FeasState& state, const Item& item, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("FEAS input outside [0, 1]");
  double v = x;
  for (const auto& e : item.consumption) {
    if (e.index >= state.remaining.size()) throw ContractViolation("resource index outside the budget vector");
    v = std::min(v, std::max(0.0, state.remaining[e.index]) / e.value);
  }
  for (const auto& e : item.consumption) {
    double& r = state.remaining[e.index];
    r -= e.value * v;
    if (r < kBudgetTolerance) {
      if (r < -kBudgetTolerance) throw InvariantError("budget counter went negative");
      r = 0.0;
    }
  }
  return v;
}

int round_bernoulli(double x, const DrawKey& key) {
  if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("ROUND input outside [0, 1]");
  return KeyedStream(key).uniform_at(0) < x ? 1 : 0;
}

int floor_policy(double x) { return x >= 1.0 ? 1 : 0; }

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Lp: return "lp";
    case PolicyKind::Nrm: return "nrm";
    case PolicyKind::Is: return "is";
    case PolicyKind::MwmLp: return "mwmlp";
    case PolicyKind::MmoGreedy: return "mmo-greedy";
  }
  return "?";
}

PolicyKind parse_policy(const std::string& name) {
  for (PolicyKind k : {PolicyKind::Lp, PolicyKind::Nrm, PolicyKind::Is, PolicyKind::MwmLp, PolicyKind::MmoGreedy}) {
    if (name == policy_name(k)) return k;
  }
  throw ConfigError("unknown policy '" + name + "'");
}

double policy_epsilon(PolicyKind kind, double epsilon, std::size_t delta) {
  if (kind == PolicyKind::MwmLp || kind == PolicyKind::MmoGreedy) {
    if (delta == 0) throw ParameterError("degree bound must be positive");
    return std::min(1.0, 2.0 * epsilon / static_cast<double>(delta));
  }
  return epsilon;
}

// ---- EpisodeContext ----------------------------------------------------------

EpisodeContext::EpisodeContext(const Simulator& sim, const SolverConfig& solver, std::uint64_t episode_seed,
                               std::uint64_t episode, std::shared_ptr<MemoTable> memo)
    : sim_(&sim),
      memo_(memo ? std::move(memo) : std::make_shared<MemoTable>(solver)),
      feas_(sim.instance().budgets),
      episode_seed_(episode_seed),
      episode_(episode) {
  shared_uniform_ = KeyedStream(DrawKey{episode_seed, Stream::SharedUniform, {episode, 0, 0}}).uniform_at(0);
}

DrawKey EpisodeContext::round_key(std::size_t t) const {
  return DrawKey{episode_seed_, Stream::Round, {episode_, t, 0}};
}

void EpisodeContext::advance(const Prefix& prefix) {
  if (prefix.length() != epoch_ + 1) throw SequencingError("policy called out of period order");
  std::string key = prefix.key();
  if (key.compare(0, last_key_.size(), last_key_) != 0) {
    throw SequencingError("prefix does not extend the previous period");
  }
  last_key_ = std::move(key);
  ++epoch_;
}

double EpisodeContext::fractional(const Prefix& prefix) {
  if (source_) {
    const double x = source_(prefix);
    if (!(x >= 0.0 && x <= 1.0)) throw ContractViolation("fractional source outside [0, 1]");
    return x;
  }
  return decide_pen(*sim_, *memo_, prefix);
}

// ---- policies --------------------------------------------------------------

namespace {

double feas_counted(EpisodeContext& ctx, const Item& item, double x) {
  const double v = feas_step(ctx.feas(), item, x);
  if (v > 0.0 && v < 1.0) ++ctx.fractional_count;
  return v;
}

}  // namespace

Decision policy_lp(EpisodeContext& ctx, const Prefix& prefix) {
  ctx.advance(prefix);
  const double x = ctx.fractional(prefix);
  return {x, feas_counted(ctx, ctx.item(prefix), x)};
}

Decision policy_nrm(EpisodeContext& ctx, const Prefix& prefix) {
  ctx.advance(prefix);
  const double x = ctx.fractional(prefix);
  const int r = round_bernoulli(x, ctx.round_key(prefix.length()));
  return {x, static_cast<double>(floor_policy(feas_counted(ctx, ctx.item(prefix), r)))};
}

Decision policy_is(EpisodeContext& ctx, const Prefix& prefix, const std::function<int(const Prefix&)>& partite_of) {
  const Decision lp = policy_lp(ctx, prefix);
  const int side = partite_of(prefix);
  if (side != 0 && side != 1) throw InstanceError("partite lookup failed");
  const double u = ctx.shared_uniform();
  const bool take = side == 0 ? lp.decision > u : lp.decision > 1.0 - u;
  return {lp.decision, take ? 1.0 : 0.0};
}

Decision policy_mwmlp(EpisodeContext& ctx, const Prefix& prefix) { return policy_lp(ctx, prefix); }

Decision MmoGreedy::step(EpisodeContext& ctx, const Prefix& prefix) {
  ctx.advance(prefix);
  if (!started_) {
    lp_feas_ = FeasState(ctx.sim().instance().budgets);
    started_ = true;
  }
  const std::size_t t = prefix.length();
  if (dead_) return {0.0, 0.0};
  const std::optional<Block> block = ctx.sim().block(prefix);
  if (!block) {
    dead_ = true;
    return {0.0, 0.0};
  }
  if (t == block->t1) {
    std::vector<double> f(block->prefixes.size());
    for (std::size_t s = 0; s < f.size(); ++s) {
      const Prefix& ps = block->prefixes[s];
      const double x = ctx.fractional(ps);
      f[s] = feas_step(lp_feas_, ctx.item(ps), x);
    }
    std::size_t best = f.size();
    for (std::size_t s = 0; s < f.size(); ++s) {
      const std::uint32_t o = block->offline[s];
      if (!(f[s] > 0.0)) continue;
      if (o < offline_used_.size() && offline_used_[o]) continue;
      if (best == f.size() || f[s] > f[best] || (f[s] == f[best] && o < block->offline[best])) best = s;
    }
    for (std::size_t s = 0; s < f.size(); ++s) planned_[block->t1 + s] = {f[s], s == best ? 1.0 : 0.0};
    if (best < f.size()) {
      const std::uint32_t o = block->offline[best];
      if (offline_used_.size() <= o) offline_used_.resize(o + 1, false);
      offline_used_[o] = true;
    }
  }
  auto it = planned_.find(t);
  if (it == planned_.end()) throw SequencingError("block decisions requested before the block's first period");
  const Decision d = it->second;
  planned_.erase(it);
  return d;
}

// ---- EpisodePolicy / PolicyFactory --------------------------------------------

EpisodePolicy::EpisodePolicy(PolicyKind kind, std::unique_ptr<EpisodeContext> ctx)
    : kind_(kind), ctx_(std::move(ctx)) {}

Decision EpisodePolicy::step(const Prefix& prefix) {
  switch (kind_) {
    case PolicyKind::Lp: return policy_lp(*ctx_, prefix);
    case PolicyKind::Nrm: return policy_nrm(*ctx_, prefix);
    case PolicyKind::Is: return policy_is(*ctx_, prefix, is_partite_of);
    case PolicyKind::MwmLp: return policy_mwmlp(*ctx_, prefix);
    case PolicyKind::MmoGreedy: return mmo_.step(*ctx_, prefix);
  }
  throw ContractViolation("unknown policy kind");
}

PolicyFactory::PolicyFactory(PolicyKind kind, std::shared_ptr<const Simulator> sim, SolverConfig solver,
                             std::size_t memo_groups)
    : kind_(kind), sim_(std::move(sim)), solver_(solver), groups_(memo_groups) {
  if (!sim_) throw ContractViolation("null simulator");
  solver_.validate(sim_->instance());
  for (std::size_t g = 0; g < groups_; ++g) {
    SolverConfig s = solver_;
    s.master_seed = mix_seed(solver_.master_seed, g);
    pool_.push_back(std::make_shared<MemoTable>(s));
  }
}

std::unique_ptr<EpisodePolicy> PolicyFactory::make(std::uint64_t episode, std::uint64_t episode_seed) const {
  std::shared_ptr<MemoTable> memo;
  SolverConfig s = solver_;
  if (groups_ > 0) {
    memo = pool_[episode % groups_];
    s = memo->config();
  } else {
    s.master_seed = mix_seed(solver_.master_seed, episode);
  }
  auto ctx = std::make_unique<EpisodeContext>(*sim_, s, episode_seed, episode, std::move(memo));
  if (source_) ctx->set_fractional_source(source_);
  return std::make_unique<EpisodePolicy>(kind_, std::move(ctx));
}

}  // namespace onpack
