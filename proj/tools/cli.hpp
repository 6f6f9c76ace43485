#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace rkf::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2, kRegression = 3 };

/// Entry point of the `rkf` tool; returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

/// `name_or_path` as given if it exists, else `<config dir>/<name>.cfg`.
std::filesystem::path resolve_config(const std::string& name_or_path);

}  // namespace rkf::cli
