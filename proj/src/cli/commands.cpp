#include "onpack/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "onpack/engine/theory.hpp"
#include "onpack/errors.hpp"
#include "onpack/model/encodings.hpp"
#include "onpack/model/nrm.hpp"
#include "onpack/model/structure.hpp"
#include "onpack/oracle.hpp"

namespace onpack::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  try {
    return j.value(key, fallback);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

void require_compatible(PolicyKind p, const LoadedInstance& inst) {
  const EncodingKind enc = inst.tree ? inst.tree->encoding() : EncodingKind::None;
  const bool ok = (p == PolicyKind::Lp || p == PolicyKind::Nrm) ||
                  (p == PolicyKind::Is && enc == EncodingKind::IndependentSet) ||
                  (p == PolicyKind::MwmLp && (enc == EncodingKind::Matching || enc == EncodingKind::MatchingOnline)) ||
                  (p == PolicyKind::MmoGreedy && enc == EncodingKind::MatchingOnline);
  if (!ok) throw ConfigError(std::string("policy '") + policy_name(p) + "' does not fit this instance");
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const AuditFailure& e) {
    err << "audit failure: " << e.what() << "\n" << e.trace();
    return kAuditFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InstanceError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

ScenarioTree two_period_tree() {
  InstanceSpec spec;
  spec.T = 2;
  spec.m = 1;
  spec.budgets = {1.0};
  spec.L = 1;
  spec.iota = 1.0;
  const ConsumptionVector one = {{0, 1.0}};
  std::vector<NodeSpec> nodes = {
      {0, -1, 1.0, Item{0.5, one}, std::nullopt},
      {1, 0, 0.5, Item{1.0, one}, std::nullopt},
      {2, 0, 0.5, Item{0.2, one}, std::nullopt},
  };
  return ScenarioTree::build(spec, std::move(nodes));
}

json generate_instance(const json& spec, std::optional<std::uint64_t> seed_override) {
  try {
    const std::string name = spec.at("name").get<std::string>();
    const std::uint64_t seed = seed_override.value_or(spec.value("seed", std::uint64_t{1}));
    if (name == "two-period") return tree_to_json(two_period_tree());
    if (name == "random-tree") {
      RandomTreeParams p;
      p.T = spec.value("T", p.T);
      p.m = spec.value("m", p.m);
      p.L = spec.value("L", p.L);
      p.iota = spec.value("iota", p.iota);
      p.min_children = spec.value("min_children", p.min_children);
      p.max_children = spec.value("max_children", p.max_children);
      p.max_nodes = spec.value("max_nodes", p.max_nodes);
      p.binary_consumption = spec.value("binary_consumption", p.binary_consumption);
      p.consume_prob = spec.value("consume_prob", p.consume_prob);
      p.budget_lo = spec.value("budget_lo", p.budget_lo);
      p.budget_hi = spec.value("budget_hi", p.budget_hi);
      p.integral_budgets = spec.value("integral_budgets", p.integral_budgets);
      return tree_to_json(random_tree(seed, p));
    }
    if (name == "nrm") {
      json g = spec;
      g["seed"] = seed;
      auto process = std::dynamic_pointer_cast<const NrmProcess>(process_from_generator(g));
      const std::string mode = spec.value("mode", std::string("explicit"));
      if (mode == "generative") {
        json gen = g;
        gen.erase("mode");
        return generative_to_json(process->instance(), gen);
      }
      if (mode != "explicit") throw ConfigError("nrm mode must be explicit or generative");
      const std::size_t cap = spec.value("node_cap", ScenarioTree::kDefaultNodeCap);
      return tree_to_json(enumerate_tree(*process, cap));
    }
    const std::size_t delta = spec.value("delta", std::size_t{2});
    const std::size_t scenarios = spec.value("scenarios", std::size_t{4});
    if (name == "is") {
      const auto p = random_is_process(seed, spec.value("n", std::size_t{4}), delta, scenarios,
                                       spec.value("edge_prob", 0.5));
      return tree_to_json(*encode_is(p).tree);
    }
    if (name == "mwm") {
      const auto p = random_mwm_process(seed, spec.value("n", std::size_t{4}), delta, scenarios);
      return tree_to_json(*encode_mwm(p).tree);
    }
    if (name == "mmo") {
      const auto p = random_mmo_process(seed, spec.value("n_offline", std::size_t{3}),
                                        spec.value("n_online", std::size_t{3}), delta, scenarios);
      return tree_to_json(*encode_mmo(p).tree);
    }
    throw ConfigError("unknown generator '" + name + "'");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generator spec: ") + e.what());
  }
}

Experiment experiment_from_json(const json& j, const std::string& base_dir, const Overrides& o) {
  Experiment e;
  try {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
      throw ConfigError("unsupported schema_version");
    }
    if (j.contains("instance")) {
      std::filesystem::path p = j.at("instance").get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      if (!std::filesystem::exists(p)) throw ConfigError("instance file not found: " + p.string());
      e.instance = load_instance_file(p.string());
      e.instance_label = j.at("instance").get<std::string>();
    } else if (j.contains("generator")) {
      e.instance = instance_from_json(generate_instance(j.at("generator"), std::nullopt));
      e.instance_label = j.at("generator").at("name").get<std::string>();
    } else {
      throw ConfigError("config names neither an instance nor a generator");
    }
    e.policy = parse_policy(get_or<std::string>(j, "policy", "lp"));
    e.episodes = o.episodes.value_or(get_or<std::size_t>(j, "episodes", 1000));
    e.seed = o.seed.value_or(get_or<std::uint64_t>(j, "seed", 1));
    e.memo_groups = get_or<std::size_t>(j, "memo_groups", 0);
    e.threads = get_or<std::size_t>(j, "threads", 0);

    require_compatible(e.policy, e.instance);
    const json solver = j.value("solver", json::object());
    const InstanceSpec& spec = e.instance.spec;
    const std::size_t delta = e.instance.tree ? std::max<std::size_t>(e.instance.tree->degree_bound(), 1) : 1;
    const double eps_user = get_or<double>(solver, "epsilon", SolverConfig{}.epsilon);
    const double eps = policy_epsilon(e.policy, eps_user, delta);
    std::size_t V = spec.V_or_default();
    if (e.instance.tree && !spec.V) V = derive_structure_constants(*e.instance.tree).V;
    if (solver.contains("theory")) {
      const Momentum mode = parse_momentum(solver.at("theory").get<std::string>().c_str());
      e.solver = theory_config(mode, eps, spec, get_or<std::uint64_t>(solver, "master_seed", e.seed));
    } else {
      e.solver = solver_from_json(solver);
      e.solver.epsilon = eps;
      if (!solver.contains("theta")) e.solver.theta = theta_default(eps, spec.T, spec.iota, V);
      if (!solver.contains("master_seed")) e.solver.master_seed = e.seed;
    }
    e.solver.validate(spec);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("experiment config: ") + ex.what());
  }
  return e;
}

std::string csv_header() {
  return "instance,policy,episodes,seed,K,eta1,eta2,alpha,theta,mean_reward,std_error,violation_count,"
         "max_violation,sim_calls,memo_hits,memo_misses,r_invocations\n";
}

std::string csv_row(const Experiment& e, const EvalReport& r) {
  double maxv = 0.0;
  for (double v : r.max_violation) maxv = std::max(maxv, v);
  std::ostringstream os;
  os << e.instance_label << ',' << policy_name(e.policy) << ',' << r.episodes << ',' << e.seed << ','
     << e.solver.K << ',' << e.solver.eta1 << ',' << e.solver.eta2 << ',' << fmt(e.solver.alpha) << ','
     << fmt(e.solver.theta) << ',' << fmt(r.mean_reward) << ',' << fmt(r.std_error) << ',' << r.violation_count
     << ',' << fmt(maxv) << ',' << r.counters.sim_calls << ',' << r.counters.hits << ',' << r.counters.misses << ','
     << r.counters.r_invocations << '\n';
  return os.str();
}

namespace {

std::string base_dir_of(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

EvalReport evaluate(const Experiment& e, bool keep_traces) {
  PolicyFactory factory(e.policy, e.instance.sim, e.solver, e.memo_groups);
  EvalOptions opt;
  opt.threads = e.threads;
  opt.keep_traces = keep_traces;
  return eval_policy_mc(factory, e.episodes, e.seed, opt);
}

void write_traces(const std::string& path, const EvalReport& r) {
  if (path.empty()) return;
  std::string text;
  for (const auto& t : r.traces) text += trace_to_json_lines(t);
  write_text_file(path, text);
}

}  // namespace

int cmd_gen(const std::string& config_path, const Overrides& o, std::ostream& err) {
  return run_guarded(err, [&] {
    const json spec = read_json_file(config_path);
    const json inst = generate_instance(spec.contains("generator") ? spec.at("generator") : spec, o.seed);
    emit(o.out, inst.dump(1) + "\n");
    return static_cast<int>(kOk);
  });
}

int cmd_params(const std::string& mode, double epsilon, std::size_t L, double iota, std::optional<double> theta,
               std::size_t T, std::size_t U, std::size_t W, const Overrides& o, std::ostream& err) {
  return run_guarded(err, [&] {
    std::vector<Momentum> modes;
    if (mode.empty() || mode == "both") {
      modes = {Momentum::Unaccelerated, Momentum::Accelerated};
    } else {
      modes = {parse_momentum(mode.c_str())};
    }
    const double th = theta.value_or(static_cast<double>(T));
    std::string out = "mode,epsilon,L,iota,theta,T,U,W,alpha,K,eta1,eta2\n";
    for (Momentum m : modes) {
      const TheoryParams p = theory_params(m, epsilon, L, iota, th, T, U, W);
      std::ostringstream os;
      os << momentum_name(m) << ',' << fmt(epsilon) << ',' << L << ',' << fmt(iota) << ',' << fmt(th) << ',' << T
         << ',' << U << ',' << W << ',' << fmt(p.alpha) << ',' << p.K << ',' << p.eta1 << ',' << p.eta2 << '\n';
      out += os.str();
    }
    emit(o.out, out);
    return static_cast<int>(kOk);
  });
}

int cmd_run(const std::string& config_path, const Overrides& o, std::ostream& err) {
  return run_guarded(err, [&] {
    const Experiment e = experiment_from_json(read_json_file(config_path), base_dir_of(config_path), o);
    const EvalReport r = evaluate(e, !o.trace.empty());
    write_traces(o.trace, r);
    emit(o.out, csv_header() + csv_row(e, r));
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const std::string& config_path, const Overrides& o, std::ostream& err) {
  return run_guarded(err, [&] {
    const Experiment e = experiment_from_json(read_json_file(config_path), base_dir_of(config_path), o);
    std::shared_ptr<const ScenarioTree> tree = e.instance.tree;
    if (!tree) {
      if (!e.instance.process) throw ConfigError("verify needs an enumerable instance");
      tree = std::make_shared<ScenarioTree>(enumerate_tree(*e.instance.process));
    }
    json out;
    try {
      const PackSolution pack = solve_pack_dp(*tree);
      out["OPT_pack"] = pack.value;
      out["OPT_pack_approximate"] = pack.approximate;
    } catch (const CapacityError&) {
      out["OPT_pack"] = nullptr;
    }
    const double opt_lp = solve_lp_explicit(*tree).value;
    out["OPT_lp"] = opt_lp;
    out["OPT_pen"] = solve_pen_unsmoothed(*tree).value;

    const double eps_t = e.solver.epsilon * static_cast<double>(e.instance.spec.T);
    out["policy"] = policy_name(e.policy);
    out["solver"] = solver_to_json(e.solver);
    out["eps_T"] = eps_t;
    EvalReport r;
    try {
      r = evaluate(e, !o.trace.empty());
    } catch (const AuditFailure& a) {
      out["audit"] = "fail";
      out["audit_message"] = a.what();
      emit(o.out, out.dump(2) + "\n");
      err << a.trace();
      return static_cast<int>(kAuditFailure);
    }
    write_traces(o.trace, r);
    const double gap = opt_lp - r.mean_reward;
    const bool pass = gap <= eps_t + 3.0 * r.std_error;
    out["mean_reward"] = r.mean_reward;
    out["std_error"] = r.std_error;
    out["ci95"] = {r.mean_reward - 1.96 * r.std_error, r.mean_reward + 1.96 * r.std_error};
    out["gap"] = gap;
    out["audit"] = "pass";
    out["episodes"] = r.episodes;
    out["pass"] = pass;
    emit(o.out, out.dump(2) + "\n");
    return static_cast<int>(pass ? kOk : kGapFailure);
  });
}

}  // namespace onpack::cli
