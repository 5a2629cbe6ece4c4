#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "onpack/cli.hpp"

int main(int argc, char** argv) {
  using namespace onpack::cli;
  CLI::App app{"Online stochastic packing solver and benchmark runner"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::string out;
  std::string trace;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config, "JSON config file");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed, "Override the seed");
    sub->add_option("--out", out, "Output file (default stdout)");
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance file from a generator spec");
  add_common(gen, true);

  auto* params = app.add_subcommand("params", "Print step size, iteration count and sample sizes");
  add_common(params, false);
  std::string mode = "both";
  double epsilon = 0.1, iota = 1.0;
  std::size_t L = 1, T = 10, U = 2, W = 1;
  std::optional<double> theta;
  params->add_option("--mode", mode, "unaccelerated, accelerated or both");
  params->add_option("--epsilon", epsilon);
  params->add_option("--L", L);
  params->add_option("--iota", iota);
  params->add_option("--theta", theta, "Smoothing level (default T)");
  params->add_option("--T", T);
  params->add_option("--U", U);
  params->add_option("--W", W);

  auto* run = app.add_subcommand("run", "Run a policy and write a CSV row");
  add_common(run, true);
  run->add_option("--episodes", episodes);
  run->add_option("--trace", trace, "JSON-lines trace of every decision");

  auto* verify = app.add_subcommand("verify", "Compare a policy with the exact optimum");
  add_common(verify, true);
  verify->add_option("--episodes", episodes);
  verify->add_option("--trace", trace, "JSON-lines trace of every decision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  Overrides o{seed, episodes, out, trace};
  if (*gen) return cmd_gen(config, o, std::cerr);
  if (*params) return cmd_params(mode, epsilon, L, iota, theta, T, U, W, o, std::cerr);
  if (*run) return cmd_run(config, o, std::cerr);
  if (*verify) return cmd_verify(config, o, std::cerr);
  return kConfigError;
}
