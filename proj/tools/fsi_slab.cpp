#include <iostream>

#include <CLI11.hpp>

#include "fsi_slab/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace fsi_slab;
  CLI::App app{"Compressible fluid / elastic plate slab solver"};
  app.require_subcommand(1);
  CommandFlags flags;
  std::string config_path;
  std::string out;
  int workers = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration JSON")->required();
    sub->add_option("--out", out, "output directory (FSI_SLAB_OUT overrides)");
    sub->add_flag("--strict", flags.strict, "abort on energy-inequality violation");
    sub->add_option("--seed", flags.seed, "seed for randomized parts");
  };
  CLI::App* run = app.add_subcommand("run", "time integration of one configuration");
  common(run);
  CLI::App* sw = app.add_subcommand("sweep", "eps-nu limit sweep against a reference");
  common(sw);
  sw->add_option("--workers", workers, "concurrent sweep rows");
  CLI::App* check = app.add_subcommand("check", "property suites");
  std::string subject;
  check->add_option("subject", subject, "geometry | plate | energy")->required();
  check->add_option("--seed", flags.seed, "seed for randomized suites");
  check->add_option("--tol", flags.tol, "energy inequality tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::config;
  }
  if (!out.empty()) flags.out = out;
  if (workers > 0) flags.workers = workers;

  if (*check) return cmd_check(subject, flags);
  ConfigDocument doc;
  try {
    doc = load_config(config_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::config;
  }
  if (*run) return cmd_run(doc, flags);
  return cmd_sweep(doc, flags);
}
