#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "onpack/errors.hpp"
#include "onpack/oracle.hpp"

namespace onpack {

namespace {

using StepFn = std::function<Decision(const Prefix&)>;
using CountersFn = std::function<MemoCounters()>;

struct EpisodeResult {
  double reward = 0.0;
  std::vector<double> violation;  // (consumed - b)+ per resource
  bool violated = false;
  MemoCounters counters;
  std::size_t fractional_count = 0;
  EpisodeTrace trace;
  std::exception_ptr error;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

void run_episode(const Simulator& sim, std::uint64_t seed, std::uint64_t e, const StepFn& step,
                 const CountersFn& counters, EpisodeResult& out) {
  const InstanceSpec& inst = sim.instance();
  const Trajectory traj = sim.complete(Prefix(sim.dim()), DrawKey{seed, Stream::Episode, {e, 0, 0}});
  const std::vector<Item> items = sim.readout(traj);
  std::vector<double> used(inst.m, 0.0);
  long double reward = 0.0L;
  out.trace.episode = e;
  MemoCounters before = counters ? counters() : MemoCounters{};
  for (std::size_t t = 1; t <= inst.T; ++t) {
    const Prefix prefix = traj.prefix(t);
    const Decision d = step(prefix);
    if (!(d.decision >= 0.0 && d.decision <= 1.0)) throw ContractViolation("policy decision outside [0, 1]");
    const Item& item = items[t - 1];
    reward += static_cast<long double>(item.reward) * d.decision;
    for (const auto& a : item.consumption) used[a.index] += a.value * d.decision;
    TraceStep ts;
    ts.t = t;
    ts.prefix_id = key_hash(prefix.key());
    ts.fractional = d.fractional;
    ts.decision = d.decision;
    ts.remaining.resize(inst.m);
    for (std::size_t i = 0; i < inst.m; ++i) ts.remaining[i] = inst.budgets[i] - used[i];
    if (counters) {
      const MemoCounters now = counters();
      ts.counters = now - before;
      before = now;
    }
    out.counters.sim_calls += ts.counters.sim_calls;
    out.counters.oracle_calls += ts.counters.oracle_calls;
    out.counters.hits += ts.counters.hits;
    out.counters.misses += ts.counters.misses;
    out.counters.r_invocations += ts.counters.r_invocations;
    out.counters.draw_sets += ts.counters.draw_sets;
    out.trace.steps.push_back(std::move(ts));
  }
  out.reward = static_cast<double>(reward);
  out.trace.reward = out.reward;
  out.violation.assign(inst.m, 0.0);
  for (std::size_t i = 0; i < inst.m; ++i) {
    const double over = used[i] - inst.budgets[i];
    if (over > kBudgetTolerance) out.violated = true;
    out.violation[i] = std::max(0.0, over);
  }
}

using EpisodeFn = std::function<void(std::uint64_t e, EpisodeResult& out)>;

EvalReport evaluate(const Simulator& sim, std::size_t n, std::size_t groups, const EpisodeFn& episode,
                    const EvalOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<EpisodeResult> results(n);
  std::size_t threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  if (groups > 0) threads = std::min(threads, groups);
  std::atomic<bool> stop{false};
  auto worker = [&](std::size_t w) {
    for (std::size_t e = 0; e < n && !stop.load(); ++e) {
      const std::size_t lane = groups > 0 ? (e % groups) % threads : e % threads;
      if (lane != w) continue;
      try {
        episode(e, results[e]);
        if (results[e].violated && opt.abort_on_violation) stop = true;
      } catch (...) {
        results[e].error = std::current_exception();
        stop = true;
      }
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  EvalReport rep;
  rep.episodes = n;
  rep.max_violation.assign(sim.instance().m, 0.0);
  long double sum = 0.0L;
  for (std::size_t e = 0; e < n; ++e) {
    EpisodeResult& r = results[e];
    if (r.error) std::rethrow_exception(r.error);
    if (r.violated) {
      if (opt.abort_on_violation) {
        throw AuditFailure("feasibility audit failed in episode " + std::to_string(e), trace_to_json_lines(r.trace));
      }
      ++rep.violation_count;
    }
    for (std::size_t i = 0; i < rep.max_violation.size() && i < r.violation.size(); ++i) {
      rep.max_violation[i] = std::max(rep.max_violation[i], r.violation[i]);
    }
    sum += r.reward;
    rep.counters.sim_calls += r.counters.sim_calls;
    rep.counters.oracle_calls += r.counters.oracle_calls;
    rep.counters.hits += r.counters.hits;
    rep.counters.misses += r.counters.misses;
    rep.counters.r_invocations += r.counters.r_invocations;
    rep.counters.draw_sets += r.counters.draw_sets;
    rep.max_fractional_count = std::max(rep.max_fractional_count, r.fractional_count);
  }
  if (n > 0) {
    const long double mean = sum / n;
    long double ss = 0.0L;
    for (const auto& r : results) ss += (r.reward - mean) * (r.reward - mean);
    rep.mean_reward = static_cast<double>(mean);
    rep.std_error = n > 1 ? static_cast<double>(std::sqrt(ss / (n - 1) / n)) : 0.0;
  }
  if (opt.keep_rewards) {
    for (const auto& r : results) rep.rewards.push_back(r.reward);
  }
  if (opt.keep_traces) {
    for (auto& r : results) rep.traces.push_back(std::move(r.trace));
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

std::string trace_to_json_lines(const EpisodeTrace& trace) {
  std::string out;
  for (const TraceStep& s : trace.steps) {
    nlohmann::json j;
    j["episode"] = trace.episode;
    j["t"] = s.t;
    j["prefix_id"] = hex64(s.prefix_id);
    j["fractional"] = s.fractional;
    j["decision"] = s.decision;
    j["remaining"] = s.remaining;
    j["sim_calls"] = s.counters.sim_calls;
    j["memo_hits"] = s.counters.hits;
    j["memo_misses"] = s.counters.misses;
    j["r_invocations"] = s.counters.r_invocations;
    out += j.dump();
    out += '\n';
  }
  return out;
}

EvalReport eval_policy_mc(const PolicyFactory& factory, std::size_t n_episodes, std::uint64_t seed,
                          const EvalOptions& options) {
  const Simulator& sim = factory.sim();
  EpisodeFn fn = [&](std::uint64_t e, EpisodeResult& out) {
    auto policy = factory.make(e, seed);
    StepFn step = [&](const Prefix& p) { return policy->step(p); };
    CountersFn counters = [&]() { return policy->context().memo().counters(); };
    run_episode(sim, seed, e, step, counters, out);
    out.fractional_count = policy->context().fractional_count;
  };
  return evaluate(sim, n_episodes, factory.groups(), fn, options);
}

EvalReport eval_rule_mc(const Simulator& sim, const DecisionRule& rule, std::size_t n_episodes, std::uint64_t seed,
                        const EvalOptions& options) {
  EpisodeFn fn = [&](std::uint64_t e, EpisodeResult& out) {
    StepFn step = [&](const Prefix& p) {
      const double d = rule(e, p);
      return Decision{d, d};
    };
    run_episode(sim, seed, e, step, nullptr, out);
  };
  return evaluate(sim, n_episodes, 0, fn, options);
}

}  // namespace onpack
