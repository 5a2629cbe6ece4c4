#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "onpack/engine/config.hpp"
#include "onpack/engine/memo.hpp"
#include "onpack/model/process.hpp"
#include "onpack/model/rng.hpp"

namespace onpack {

inline constexpr double kBudgetTolerance = 1e-9;

// Running budgets b_i - sum_{r<t} a_i(S^r) decision(S^r).
struct FeasState {
  std::vector<double> remaining;

  FeasState() = default;
  explicit FeasState(std::vector<double> budgets) : remaining(std::move(budgets)) {}
};

// FEAS on one period: min(x, min_{i in a+(S)} remaining_i / a_i(S)), then
// charges the result. Counters within 1e-9 of zero are snapped to zero.
double feas_step(FeasState& state, const Item& item, double x);

// Bernoulli(x) from the first uniform of the keyed stream.
int round_bernoulli(double x, const DrawKey& key);

// 1 for exactly 1.0, otherwise 0.
int floor_policy(double x);

enum class PolicyKind { Lp, Nrm, Is, MwmLp, MmoGreedy };

const char* policy_name(PolicyKind kind);
PolicyKind parse_policy(const std::string& name);

// The epsilon handed to the solver for a policy family: the matching
// families rescale to 2 eps / Delta so the gap is measured against n rather
// than the number of potential edges.
double policy_epsilon(PolicyKind kind, double epsilon, std::size_t delta);

struct Decision {
  double fractional = 0.0;  // the solver value A_pen(S) that drove the decision
  double decision = 0.0;    // value actually taken, in [0, 1]
};

// Per-episode state: the memo table of the recursive routine, FEAS counters,
// the shared uniform for threshold rounding and the ROUND stream.
class EpisodeContext {
 public:
  // solver.master_seed drives the routine; episode_seed and episode key the
  // rounding randomness. A null memo creates a fresh table.
  EpisodeContext(const Simulator& sim, const SolverConfig& solver, std::uint64_t episode_seed,
                 std::uint64_t episode, std::shared_ptr<MemoTable> memo = nullptr);

  const Simulator& sim() const noexcept { return *sim_; }
  const SolverConfig& solver() const noexcept { return memo_->config(); }
  MemoTable& memo() noexcept { return *memo_; }
  FeasState& feas() noexcept { return feas_; }
  const FeasState& feas() const noexcept { return feas_; }
  double shared_uniform() const noexcept { return shared_uniform_; }
  std::uint64_t episode() const noexcept { return episode_; }
  DrawKey round_key(std::size_t t) const;

  // Registers the next period; throws SequencingError unless prefix extends
  // the previous one by exactly one period.
  void advance(const Prefix& prefix);
  std::size_t epoch() const noexcept { return epoch_; }

  // A_pen(S): decide_pen through the memo, or the override when set.
  double fractional(const Prefix& prefix);
  void set_fractional_source(std::function<double(const Prefix&)> source) { source_ = std::move(source); }

  Item item(const Prefix& prefix) const { return sim_->item(prefix); }

  // FEAS outputs strictly between 0 and 1 in this episode.
  std::size_t fractional_count = 0;

 private:
  const Simulator* sim_;
  std::shared_ptr<MemoTable> memo_;
  FeasState feas_;
  double shared_uniform_ = 0.0;
  std::uint64_t episode_seed_ = 0;
  std::uint64_t episode_ = 0;
  std::size_t epoch_ = 0;
  std::string last_key_;
  std::function<double(const Prefix&)> source_;
};

// FEAS(A_pen).
Decision policy_lp(EpisodeContext& ctx, const Prefix& prefix);
// FLOOR(FEAS(ROUND(A_pen))).
Decision policy_nrm(EpisodeContext& ctx, const Prefix& prefix);
// I(A_lp(S) > U) on the left partite, I(A_lp(S) > 1 - U) on the right.
Decision policy_is(EpisodeContext& ctx, const Prefix& prefix, const std::function<int(const Prefix&)>& partite_of);
// policy_lp on a matching encoding; epsilon already rescaled by the caller.
Decision policy_mwmlp(EpisodeContext& ctx, const Prefix& prefix);

// Greedy rounding baseline for matching with online nodes. At the first
// period of an online node's block it computes the fractional values of all
// the node's edges, then takes the largest positive one whose offline node is
// still free (ties to the lowest offline index).
class MmoGreedy {
 public:
  Decision step(EpisodeContext& ctx, const Prefix& prefix);

 private:
  FeasState lp_feas_;
  bool started_ = false;
  bool dead_ = false;
  std::vector<bool> offline_used_;
  std::map<std::size_t, Decision> planned_;
};

// One streaming policy instance for one episode.
class EpisodePolicy {
 public:
  EpisodePolicy(PolicyKind kind, std::unique_ptr<EpisodeContext> ctx);
  Decision step(const Prefix& prefix);
  EpisodeContext& context() { return *ctx_; }
  PolicyKind kind() const noexcept { return kind_; }

 private:
  PolicyKind kind_;
  std::unique_ptr<EpisodeContext> ctx_;
  MmoGreedy mmo_;
};

// Builds EpisodePolicy objects. With memo_groups = P > 0, episode e runs the
// routine with solver seed mix(seed, e mod P) and reuses one memo table per
// residue; episodes of one residue must then run sequentially, which
// `groups` reports to the evaluator. With P = 0 every episode gets its own
// seed mix(seed, e) and a fresh table.
class PolicyFactory {
 public:
  PolicyFactory(PolicyKind kind, std::shared_ptr<const Simulator> sim, SolverConfig solver,
                std::size_t memo_groups = 0);

  std::unique_ptr<EpisodePolicy> make(std::uint64_t episode, std::uint64_t episode_seed) const;
  std::size_t groups() const noexcept { return groups_; }
  const Simulator& sim() const { return *sim_; }
  PolicyKind kind() const noexcept { return kind_; }
  const SolverConfig& solver() const noexcept { return solver_; }

  // Optional override of A_pen for every episode (tests and baselines).
  void set_fractional_source(std::function<double(const Prefix&)> source) { source_ = std::move(source); }

 private:
  PolicyKind kind_;
  std::shared_ptr<const Simulator> sim_;
  SolverConfig solver_;
  std::size_t groups_;
  std::vector<std::shared_ptr<MemoTable>> pool_;
  std::function<double(const Prefix&)> source_;
};

}  // namespace onpack
