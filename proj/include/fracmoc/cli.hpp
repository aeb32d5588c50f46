#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fracmoc::cli {

// 0 pass, 1 tolerance exceeded, 2 usage/validation error, 3 runtime failure.
enum ExitCode : int { kOk = 0, kToleranceFail = 1, kUsage = 2, kRuntime = 3 };

// Each command takes the arguments that follow the subcommand name.
int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_frderiv(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_verify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Dispatches on args[0] (the subcommand).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracmoc::cli
