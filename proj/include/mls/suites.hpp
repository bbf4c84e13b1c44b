#pragma once

#include <string>

namespace mls {

// Property suites behind `check --suite <name>`, name one of
// geometry | samplers | transport | oracle.  Prints one line per check
// and returns the number of failures (0 on success).  Unknown names
// throw ValidationError.
int run_suite(const std::string& name);

}  // namespace mls
