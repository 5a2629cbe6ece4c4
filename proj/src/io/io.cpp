#include "onpack/io.hpp"

#include <fstream>
#include <sstream>

#include "onpack/errors.hpp"
#include "onpack/model/nrm.hpp"

namespace onpack {

using nlohmann::json;

namespace {

const char* encoding_name(EncodingKind k) {
  switch (k) {
    case EncodingKind::IndependentSet: return "is";
    case EncodingKind::Matching: return "matching";
    case EncodingKind::MatchingOnline: return "matching_online";
    case EncodingKind::None: break;
  }
  return "none";
}

EncodingKind parse_encoding(const std::string& s) {
  if (s == "none") return EncodingKind::None;
  if (s == "is") return EncodingKind::IndependentSet;
  if (s == "matching") return EncodingKind::Matching;
  if (s == "matching_online") return EncodingKind::MatchingOnline;
  throw InstanceError("unknown encoding '" + s + "'");
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InstanceError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

json instance_header_json(const InstanceSpec& spec) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["T"] = spec.T;
  j["m"] = spec.m;
  j["b"] = spec.budgets;
  j["L"] = spec.L;
  j["iota"] = spec.iota;
  json s = json::object();
  if (spec.U) s["U"] = *spec.U;
  if (spec.V) s["V"] = *spec.V;
  if (spec.W) s["W"] = *spec.W;
  if (!s.empty()) j["structure"] = s;
  return j;
}

InstanceSpec instance_header_from_json(const json& j) {
  return guarded("instance header", [&] {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
      throw InstanceError("unsupported schema_version");
    }
    InstanceSpec s;
    s.T = j.at("T").get<std::size_t>();
    s.m = j.at("m").get<std::size_t>();
    s.budgets = j.at("b").get<std::vector<double>>();
    s.L = j.value("L", std::size_t{1});
    s.iota = j.value("iota", 1.0);
    if (j.contains("structure")) {
      const json& st = j.at("structure");
      if (st.contains("U")) s.U = st.at("U").get<std::size_t>();
      if (st.contains("V")) s.V = st.at("V").get<std::size_t>();
      if (st.contains("W")) s.W = st.at("W").get<std::size_t>();
    }
    s.validate();
    return s;
  });
}

json tree_to_json(const ScenarioTree& tree) {
  json j = instance_header_json(tree.instance());
  j["kind"] = "explicit";
  json nodes = json::array();
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const TreeNode& n = tree.node(id);
    json a = json::array();
    for (const auto& e : n.item.consumption) a.push_back(json::array({e.index, e.value}));
    nodes.push_back({{"prefix_id", id},
                     {"parent_id", n.parent},
                     {"prob", n.prob},
                     {"Z", n.item.reward},
                     {"a", a},
                     {"obs", n.observation}});
  }
  j["tree"] = {{"nodes", nodes}};
  if (tree.encoding() != EncodingKind::None) {
    j["encoding"] = {{"kind", encoding_name(tree.encoding())}, {"delta", tree.degree_bound()}};
  }
  return j;
}

json generative_to_json(const InstanceSpec& spec, const json& generator) {
  json j = instance_header_json(spec);
  j["kind"] = "generative";
  j["generator"] = generator;
  return j;
}

std::shared_ptr<const Process> process_from_generator(const json& g) {
  return guarded("generator", [&]() -> std::shared_ptr<const Process> {
    const std::string name = g.at("name").get<std::string>();
    if (name == "nrm") {
      NrmParams p;
      p.seed = g.value("seed", p.seed);
      p.T = g.value("T", p.T);
      p.m = g.value("m", p.m);
      p.L = g.value("L", p.L);
      p.iota = g.value("iota", p.iota);
      p.budget_ratio = g.value("budget_ratio", p.budget_ratio);
      p.products = g.value("products", p.products);
      p.stay = g.value("stay", p.stay);
      return std::make_shared<NrmProcess>(p);
    }
    throw ConfigError("generator '" + name + "' has no generative form");
  });
}

LoadedInstance instance_from_json(const json& j) {
  LoadedInstance out;
  out.spec = instance_header_from_json(j);
  const std::string kind = guarded("instance", [&] { return j.value("kind", std::string("explicit")); });
  if (kind == "generative") {
    out.generator = guarded("instance", [&] { return j.at("generator"); });
    out.process = process_from_generator(out.generator);
    const InstanceSpec& ps = out.process->instance();
    if (ps.T != out.spec.T || ps.m != out.spec.m || ps.budgets != out.spec.budgets) {
      throw InstanceError("instance header disagrees with its generator");
    }
    out.sim = std::make_shared<ProcessSimulator>(out.process);
    return out;
  }
  if (kind != "explicit") throw ConfigError("unknown instance kind '" + kind + "'");
  std::vector<NodeSpec> specs = guarded("tree", [&] {
    std::vector<NodeSpec> v;
    for (const json& n : j.at("tree").at("nodes")) {
      NodeSpec s;
      s.id = n.at("prefix_id").get<std::int64_t>();
      s.parent_id = n.value("parent_id", std::int64_t{-1});
      s.prob = n.at("prob").get<double>();
      s.item.reward = n.value("Z", 0.0);
      std::vector<SparseEntry> entries;
      for (const json& a : n.value("a", json::array())) {
        entries.push_back({a.at(0).get<std::uint32_t>(), a.at(1).get<double>()});
      }
      s.item.consumption = make_consumption(std::move(entries));
      if (n.contains("obs")) s.observation = n.at("obs").get<std::vector<double>>();
      v.push_back(std::move(s));
    }
    return v;
  });
  auto tree = std::make_shared<ScenarioTree>(ScenarioTree::build(out.spec, std::move(specs)));
  if (j.contains("encoding")) {
    guarded("encoding", [&] {
      const json& e = j.at("encoding");
      tree->set_encoding(parse_encoding(e.at("kind").get<std::string>()), e.value("delta", std::size_t{0}));
      return 0;
    });
  }
  out.tree = tree;
  out.sim = tree_as_simulator(tree);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

LoadedInstance load_instance_file(const std::string& path) { return instance_from_json(read_json_file(path)); }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed for " + path);
}

json solver_to_json(const SolverConfig& c) {
  return {{"epsilon", c.epsilon}, {"theta", c.theta},     {"alpha", c.alpha},
          {"momentum", momentum_name(c.momentum)},       {"K", c.K},
          {"eta1", c.eta1},       {"eta2", c.eta2},       {"master_seed", c.master_seed},
          {"practical_override", c.practical_override}};
}

SolverConfig solver_from_json(const json& j) {
  try {
    SolverConfig c;
    c.epsilon = j.value("epsilon", c.epsilon);
    c.theta = j.value("theta", c.theta);
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("momentum")) c.momentum = parse_momentum(j.at("momentum").get<std::string>().c_str());
    c.K = j.value("K", c.K);
    c.eta1 = j.value("eta1", c.eta1);
    c.eta2 = j.value("eta2", c.eta2);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.practical_override = j.value("practical_override", c.practical_override);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("solver config: ") + e.what());
  }
}

json report_to_json(const EvalReport& r) {
  return {{"mean_reward", r.mean_reward},
          {"std_error", r.std_error},
          {"episodes", r.episodes},
          {"violation_count", r.violation_count},
          {"max_violation", r.max_violation},
          {"wall_seconds", r.wall_seconds},
          {"sim_calls", r.counters.sim_calls},
          {"memo_hits", r.counters.hits},
          {"memo_misses", r.counters.misses},
          {"r_invocations", r.counters.r_invocations},
          {"max_fractional_count", r.max_fractional_count}};
}

}  // namespace onpack
