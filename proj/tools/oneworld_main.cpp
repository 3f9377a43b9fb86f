#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <omp.h>
#include <optional>
#include <string>

#include "ow/acceptance.hpp"
#include "ow/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"oneworld: grid Schrodinger propagation, one-world stochastic paths, "
               "parameter-space flows, ADF Gaussians and branching dynamics"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario config file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--threads", threads, "OpenMP thread count");
  };

  for (const char* name : {"grid", "paths", "double_slit", "param_flow", "adf", "branch",
                           "feynman_kac"})
    add_common(app.add_subcommand(name, std::string("run a ") + name + " scenario"));

  auto* run = app.add_subcommand("run", "run any scenario from its config");
  add_common(run);

  std::string suite = "primary", filter;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", suite, "suite name (primary)");
  verify->add_option("--filter", filter, "only criteria whose name contains this");
  verify->add_option("--threads", threads, "OpenMP thread count");

  CLI11_PARSE(app, argc, argv);

  if (threads <= 0) {
    if (const char* env = std::getenv("ONEWORLD_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);

  if (verify->parsed()) {
    if (suite != "primary") {
      std::cerr << "error: unknown suite '" << suite << "'\n";
      return 2;
    }
    return ow::acceptance::run_suite(std::cout, filter) ? 0 : 5;
  }
  return ow::run_scenario_file(config_path, out_dir, seed);
}
