#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "relanosov/config.hpp"

namespace relanosov {

// Exit statuses of relanosov-lab.
constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;  // verdict disagrees with the item's expected tag
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
  std::vector<std::filesystem::path> files;  // written, in order
};

// Each command writes into config.out and returns the main report. Errors
// propagate as exceptions; run_cli maps them to exit codes.
CommandResult cmd_build_cusp(const RunConfig& config, std::ostream& log);
// which: divergence | weakdom | transversality | dynamics
CommandResult cmd_certify(const RunConfig& config, const std::string& which, std::ostream& log);
CommandResult cmd_diagnose(const RunConfig& config, std::ostream& log);

// relanosov-lab <build-cusp|certify|diagnose|example> --config <path>
//               [--out <dir>] [--seed <u64>] [--workers <n>]
// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace relanosov
