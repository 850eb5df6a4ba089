#ifndef SOFTSKILL_TOOLS_COMMANDS_H_
#define SOFTSKILL_TOOLS_COMMANDS_H_

#include <cstdint>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace softskill::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
  std::string command;
  std::string config_hash;

  // Written as the first line / header of every output artifact.
  nlohmann::json meta() const;
};

// Adds all subcommands to `app`. The selected subcommand's callback stores
// its action in `action`; run it after parsing.
void register_commands(CLI::App& app, Globals& globals,
                       std::function<int()>& action);

// Hash of the effective configuration of the selected subcommand (all
// option values, file or flag, excluding output paths).
std::string effective_config_hash(const CLI::App& app, const CLI::App& sub);

}  // namespace softskill::cli

#endif  // SOFTSKILL_TOOLS_COMMANDS_H_
