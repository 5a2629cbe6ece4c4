#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "onpack/engine/config.hpp"
#include "onpack/io.hpp"
#include "onpack/policies.hpp"

namespace onpack::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kGapFailure = 3, kAuditFailure = 4 };

// Common command-line overrides.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::string out;    // empty: stdout
  std::string trace;  // JSON-lines trace path, empty for none
};

struct Experiment {
  LoadedInstance instance;
  PolicyKind policy = PolicyKind::Lp;
  SolverConfig solver;
  std::size_t episodes = 1000;
  std::uint64_t seed = 1;
  std::size_t memo_groups = 0;
  std::size_t threads = 0;
  std::string instance_label;
};

// Instance JSON for a generator spec such as {"name": "nrm", "T": 4, ...}.
// Names: two-period, random-tree, nrm, is, mwm, mmo.
nlohmann::json generate_instance(const nlohmann::json& spec, std::optional<std::uint64_t> seed);

// The fixed two-period instance: T=2, m=1, b=1, a=1 everywhere, Z=0.5 at
// t=1 and Z=1 or 0.2 with probability 1/2 each at t=2.
ScenarioTree two_period_tree();

// Parses an experiment config; relative instance paths resolve against
// base_dir. Solver fields left out are derived: theta from the default
// smoothing level, or every parameter from the theory formulas when
// solver.theory names a momentum schedule.
Experiment experiment_from_json(const nlohmann::json& j, const std::string& base_dir, const Overrides& o);

std::string csv_header();
std::string csv_row(const Experiment& e, const EvalReport& r);

int cmd_gen(const std::string& config_path, const Overrides& o, std::ostream& err);
int cmd_params(const std::string& mode, double epsilon, std::size_t L, double iota, std::optional<double> theta,
               std::size_t T, std::size_t U, std::size_t W, const Overrides& o, std::ostream& err);
int cmd_run(const std::string& config_path, const Overrides& o, std::ostream& err);
int cmd_verify(const std::string& config_path, const Overrides& o, std::ostream& err);

}  // namespace onpack::cli
