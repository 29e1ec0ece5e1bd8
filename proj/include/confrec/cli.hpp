#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confrec::cli {

enum ExitCode { kOk = 0, kInternal = 1, kValidation = 2, kBudget = 3, kBracket = 4 };

// Runs the confrec command line (arguments without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace confrec::cli
