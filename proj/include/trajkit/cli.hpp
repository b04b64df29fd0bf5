#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trajkit {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;  // validation, parameter, configuration or metric error
inline constexpr int kExitIo = 2;

// Environment variable holding the default seed.
inline constexpr const char* kSeedEnv = "TRAJKIT_SEED";

// Runs one subcommand. `args` excludes the program name. Results go to files
// or `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace trajkit
