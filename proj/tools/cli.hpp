#pragma once

#include <exception>
#include <iosfwd>

namespace robin::cli {

/// Process exit codes (sysexits-style above 2).
enum ExitCode : int {
  kOk = 0,              ///< proved / check passed
  kFailed = 1,          ///< certification failed or a check found a violation
  kIndeterminate = 2,   ///< intervals still straddle the threshold after the retry
  kUsage = 64,          ///< bad command line, configuration or environment
  kDataError = 65,      ///< a module rejected its input during the run
  kNoInput = 66,        ///< an input file (checkpoint) is missing or unreadable
  kPrecision = 70,      ///< precision exhausted before a comparison was decided
  kResource = 71,       ///< memory budget exceeded
  kCannotCreate = 73,   ///< an output file could not be written
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e) noexcept;

/// Parses argv and runs one command; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace robin::cli
