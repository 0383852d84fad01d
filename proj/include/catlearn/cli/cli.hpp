#pragma once

#include <iosfwd>

namespace catlearn::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,    ///< I/O or unexpected runtime error
    kExitConfig = 2,     ///< bad flags, config file or parameters
    kExitIncomplete = 3, ///< target partition not reached / WCST not completed
};

/// `catlearn run|sweep|wcst|serve [flags]`. Results go to `out` unless
/// --out is given; diagnostics go to `err`.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace catlearn::cli
