#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lineguard::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kInputError = 2,
};

// Runs one command line. args excludes the program name. Normal output goes
// to out unless an --output file is named; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// %.12g, so equal inputs print byte-identical output.
std::string format_number(double v);

}  // namespace lineguard::cli
