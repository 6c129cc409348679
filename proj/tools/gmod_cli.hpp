#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmod {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kValidation = 2,
  kDegenerate = 3,
};

struct Environment {
  bool color = false;  // ANSI highlighting of human-readable text
};

/// Runs one gmod command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

}  // namespace gmod
