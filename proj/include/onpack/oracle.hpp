#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "onpack/engine/memo.hpp"
#include "onpack/model/scenario_tree.hpp"
#include "onpack/penalty.hpp"
#include "onpack/policies.hpp"

namespace onpack {

// ---- dense simplex ------------------------------------------------------------

struct LpResult {
  double value = 0.0;
  std::vector<double> x;
  std::vector<double> duals;  // one per row, >= 0 at optimum
  std::size_t pivots = 0;
};

// max c.x subject to A x <= b, x >= 0, with b >= 0 (the origin is feasible).
// A is row-major rows x c.size(). Dantzig pricing, switching to Bland's rule
// after a run of degenerate pivots; throws ConvergenceError when unbounded or
// over the pivot cap.
LpResult simplex_max(std::span<const double> c, std::span<const double> A, std::span<const double> b,
                     std::size_t max_pivots = 1000000);

// ---- exact solvers on explicit trees --------------------------------------------

struct PackSolution {
  double value = 0.0;
  std::vector<double> policy;  // optimal 0/1 decision per node
  bool approximate = false;    // consumptions not on a common grid
  std::size_t states = 0;
};

// Backward induction over (node, consumed budget). Exact when every a_i(S)
// is a multiple of a grid 1/q, q <= 10^4. Throws CapacityError past state_cap.
PackSolution solve_pack_dp(const ScenarioTree& tree, std::size_t state_cap = 1000000);

struct LpSolution {
  double value = 0.0;
  std::vector<double> x;  // per node
};

// OPT_lp: one row per (i, leaf) plus x <= 1 rows.
LpSolution solve_lp_explicit(const ScenarioTree& tree);

// OPT_pen for the unsmoothed penalty, exactly, as an LP with one slack per
// (leaf, resource).
LpSolution solve_pen_unsmoothed(const ScenarioTree& tree);

struct PenSolution {
  double value = 0.0;
  std::vector<double> x;
  double stationarity = 0.0;  // gradient-mapping norm at exit
  std::size_t iterations = 0;
};

// OPT_pen^theta by accelerated projected gradient ascent with backtracking,
// in the geometry weighted by mu, until the gradient-mapping norm is <= tol.
// Throws ConvergenceError past max_iterations.
PenSolution solve_pen_explicit(const ScenarioTree& tree, SmoothingParam theta, double tol = 1e-8,
                               std::size_t max_iterations = 2000000);

// sum_S mu(S) Z(S) x(S); x must cover every node.
double eval_policy_exact(const ScenarioTree& tree, std::span<const double> x);

// ---- Monte Carlo evaluation ----------------------------------------------------------

struct TraceStep {
  std::size_t t = 0;
  std::uint64_t prefix_id = 0;
  double fractional = 0.0;
  double decision = 0.0;
  std::vector<double> remaining;
  MemoCounters counters;  // work done by this decision
};

struct EpisodeTrace {
  std::uint64_t episode = 0;
  double reward = 0.0;
  std::vector<TraceStep> steps;
};

std::string trace_to_json_lines(const EpisodeTrace& trace);

struct EvalOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
  bool abort_on_violation = true;
  bool keep_traces = false;
  bool keep_rewards = false;
};

struct EvalReport {
  double mean_reward = 0.0;
  double std_error = 0.0;
  std::size_t episodes = 0;
  std::size_t violation_count = 0;
  std::vector<double> max_violation;  // per resource, max over episodes of (consumed - b_i)+
  double wall_seconds = 0.0;
  MemoCounters counters;               // totals over all episodes
  std::size_t max_fractional_count = 0;
  std::vector<double> rewards;         // when keep_rewards
  std::vector<EpisodeTrace> traces;    // when keep_traces
};

// Runs n episodes. Episode e follows the trajectory keyed by (seed, e) and a
// fresh policy from the factory. Every episode is audited:
// sum_t a_i decision <= b_i + 1e-9 for all i. With abort_on_violation an
// audit failure throws AuditFailure carrying the episode trace. Results do
// not depend on the thread count.
EvalReport eval_policy_mc(const PolicyFactory& factory, std::size_t n_episodes, std::uint64_t seed,
                          const EvalOptions& options = {});

// Same loop with a caller-supplied decision rule (no policy object); used
// for baselines such as a fixed fractional solution replayed on a tree.
using DecisionRule = std::function<double(std::uint64_t episode, const Prefix& prefix)>;
EvalReport eval_rule_mc(const Simulator& sim, const DecisionRule& rule, std::size_t n_episodes, std::uint64_t seed,
                        const EvalOptions& options = {});

}  // namespace onpack
