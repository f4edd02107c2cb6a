#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace purity::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kValidation = 2,
  kSamplerDiagnostic = 3,
  kCrossCheckFailure = 4,
};

/// Runs the `purity` command line. `args` excludes the program name.
/// Tables go to `out` unless --out or PURITY_OUT_DIR names a file; messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace purity::cli
