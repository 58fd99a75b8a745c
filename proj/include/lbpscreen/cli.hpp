#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace lbpscreen::cli {

/// Process exit codes; listed in `--help`.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,         // bad flag, missing required flag, invalid combination
  kUnreadable = 2,    // input file missing/unreadable or output not writable
  kInvalidInput = 3,  // malformed manifest or image
  kEvaluation = 4,    // data unusable for training (e.g. a single-class fold)
  kInternal = 5,
};

/// Runs `lbp-screen` with args (without the program name). Reports go to
/// `out` unless `--out` names a file; diagnostics go to `err` on one line.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace lbpscreen::cli
