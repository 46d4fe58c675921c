#pragma once

#include <iosfwd>

namespace slicemax::cli {

/// Process exit codes. Stable across releases.
enum ExitCode : int {
  kSuccess = 0,
  kAssertionFailure = 1,  // verify: at least one hard check failed
  kUsage = 2,             // bad command line
  kParse = 3,             // malformed grid text
  kValidation = 4,        // inconsistent parameters, unknown operator or generator
  kIo = 5,                // unreadable or unwritable file
  kInternal = 70,
};

/// Runs `slicemax <command> [flags]`. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace slicemax::cli
