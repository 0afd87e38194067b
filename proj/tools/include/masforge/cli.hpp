#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace masforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct CommandOutcome {
    int exit_code = kExitOk;
    std::vector<std::string> diagnostics;  // as written to the error stream
    std::vector<std::string> artifacts;    // files written, if any
};

struct CommandOptions {
    bool color = false;
};

/// `args` excludes the program name. Artifacts and traces go to `out`,
/// diagnostics to `err`; `in` feeds interactive runs.
CommandOutcome run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                           std::istream& in, const CommandOptions& options = {});

}  // namespace masforge
