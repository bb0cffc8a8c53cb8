#pragma once

namespace qbv {

// Command-line entry point. Exit status: 0 for sat/unsat, 1 for
// unknown/resource-out, 2 for usage or parse errors.
int run_cli(int argc, const char* const* argv);

}  // namespace qbv
