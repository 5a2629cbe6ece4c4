#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "json.hpp"
#include "onpack/engine/config.hpp"
#include "onpack/model/process.hpp"
#include "onpack/model/scenario_tree.hpp"
#include "onpack/oracle.hpp"

namespace onpack {

inline constexpr int kSchemaVersion = 1;

// An instance file in memory. Explicit instances carry the tree; generative
// ones only a simulator built from the generator block.
struct LoadedInstance {
  InstanceSpec spec;
  std::shared_ptr<const ScenarioTree> tree;
  std::shared_ptr<const Simulator> sim;
  std::shared_ptr<const Process> process;  // generative instances
  nlohmann::json generator;                // as written in the file, or null

  bool explicit_tree() const noexcept { return tree != nullptr; }
};

// Header fields shared by both kinds.
nlohmann::json instance_header_json(const InstanceSpec& spec);
InstanceSpec instance_header_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const ScenarioTree& tree);
nlohmann::json generative_to_json(const InstanceSpec& spec, const nlohmann::json& generator);

// Throws InstanceError on malformed content, ConfigError on unknown kinds.
LoadedInstance instance_from_json(const nlohmann::json& j);
LoadedInstance load_instance_file(const std::string& path);

// Builds the process described by a generator block {"name": "nrm", ...}.
std::shared_ptr<const Process> process_from_generator(const nlohmann::json& generator);

nlohmann::json solver_to_json(const SolverConfig& cfg);
// Missing fields keep the SolverConfig defaults.
SolverConfig solver_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const EvalReport& report);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace onpack
