#pragma once

#include <ostream>

namespace seqvote::cli {

enum ExitCode {
  kOk = 0,
  kInvalidInput = 1,
  kBudgetExceeded = 2,
  kVerificationFailed = 3,
};

// Runs one command line. Results go to `out` (or --out), logs to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace seqvote::cli
