#pragma once

#include <ostream>

namespace lanedac {

// Entry point of the `lanedac` tool. Exit codes: 0 success, 1 invalid
// arguments or configuration, 2 missing input file.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lanedac
