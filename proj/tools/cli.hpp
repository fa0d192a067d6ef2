#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opoly::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

/// Runs one command line (args excludes the program name). Tables go to `out`
/// unless -o is given, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker cap: hardware concurrency, limited by OPOLY_THREADS when set.
/// Throws DomainError for a malformed OPOLY_THREADS.
unsigned worker_threads();

}  // namespace opoly::cli
