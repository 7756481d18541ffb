#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dimpact::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kViolations = 1,  // oracle checks failed
  kInputError = 2,  // usage, missing files, parse or validation errors
};

/// Runs one command. `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dimpact::cli
