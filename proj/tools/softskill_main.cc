#include <exception>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "softskill/error.h"
#include "softskill/log.h"
#include "softskill/rng.h"

int main(int argc, char** argv) {
  using namespace softskill;
  CLI::App app{"Soft-skill phrase matching and candidate disambiguation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI configuration file; flags override it");

  cli::Globals globals;
  globals.seed = kDefaultSeed;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_flag("--quiet", globals.quiet, "Suppress warnings");

  std::function<int()> action;
  cli::register_commands(app, globals, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  set_quiet(globals.quiet);
  try {
    for (const CLI::App* sub : app.get_subcommands()) {
      globals.command = sub->get_name();
      globals.config_hash = cli::effective_config_hash(app, *sub);
    }
    return action ? action() : cli::kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: configuration: " << e.what() << '\n';
    return cli::kUsage;
  } catch (const TrainingError& e) {
    std::cerr << "error: training: " << e.what() << '\n';
    return cli::kData;
  } catch (const CheckpointError& e) {
    std::cerr << "error: checkpoint: " << e.what() << '\n';
    return cli::kData;
  } catch (const InputError& e) {
    std::cerr << "error: data: " << e.what() << '\n';
    return cli::kData;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return cli::kInternal;
  }
}
